//! Writes the synthetic review corpus as JSONL.
//!
//! cargo run -p sentimin --example make_fixture -- 100 2016 > corpus.jsonl

use sentimin::{synthetic, Corpus};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(2016);
    let corpus = Corpus::new(synthetic::review_corpus(n, seed), "synthetic").expect("unique ids");
    corpus
        .write_jsonl(std::io::stdout().lock())
        .expect("write corpus");
}
