//! Deterministic synthetic corpus of short, tweet-like Indonesian reviews.
//!
//! Each document combines one or two class-specific phrases with neutral
//! filler, a brand reference and typical social-media noise (mentions,
//! hashtags, links, shouting, punctuation). A minority of documents also
//! carry one phrase of the opposite sentiment. Classes stay separable in
//! aggregate, which makes the corpus useful as an end-to-end fixture.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Label, LabeledDocument};

const POSITIVE: &[&str] = &[
    "layanan baik",
    "promo pulsa mantap",
    "iklan iklan lucu",
    "pengiriman cepat sekali",
    "harga murah",
    "penjual ramah",
    "barang bagus sesuai foto",
    "puas belanja",
    "diskon mantap",
    "respon cs cepat",
    "pelayanannya membantu",
    "recommended banget",
    "aman dan terpercaya",
    "senang belanja",
];

const NEGATIVE: &[&str] = &[
    "tidak ada tanggung jawab",
    "cara ribet",
    "penjual rugi tombol bantuan tidak ada",
    "pengiriman lambat",
    "barang rusak",
    "refund lama sekali",
    "kecewa berat",
    "saldo hilang",
    "aplikasi error terus",
    "cs tidak membalas",
    "penipuan",
    "ongkir mahal",
    "komplain diabaikan",
    "pesanan dibatalkan sepihak",
];

const FILLER: &[&str] = &[
    "hari ini",
    "kemarin",
    "pesanan saya",
    "beli sepatu",
    "beli pulsa",
    "order kedua",
    "buat kado",
    "lewat aplikasi",
    "minggu lalu",
    "akun saya",
];

const MIXED_RATE: f64 = 0.15;

const BRANDS: [&str; 3] = ["bukalapak", "tokopedia", "elevenia"];

fn decorate(rng: &mut ChaCha8Rng, brand: &str, body: String) -> String {
    let mut text = match rng.gen_range(0..4) {
        0 => format!("@{brand}_care {body}"),
        1 => format!("{body} di {brand}"),
        2 => format!("#{brand} {body}"),
        _ => format!("{} {body}", capitalize(brand)),
    };
    if rng.gen_bool(0.25) {
        text.push_str(&format!(" https://t.co/{:x}", rng.gen::<u32>()));
    }
    if rng.gen_bool(0.2) {
        text = text.to_uppercase();
    }
    let ending = ["", "!", "!!", ".", " :)", "...", "?!"];
    text.push_str(ending.choose(rng).copied().unwrap_or(""));
    text
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(first) => first.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// `n_per_class` positive and `n_per_class` negative documents, interleaved
/// (positive first). The same seed always yields the same corpus.
pub fn review_corpus(n_per_class: usize, seed: u64) -> Vec<LabeledDocument> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::with_capacity(2 * n_per_class);
    for i in 0..2 * n_per_class {
        let label = if i % 2 == 0 {
            Label::Positive
        } else {
            Label::Negative
        };
        let (pool, other) = match label {
            Label::Positive => (POSITIVE, NEGATIVE),
            Label::Negative => (NEGATIVE, POSITIVE),
        };
        let brand = BRANDS[(i / 2) % BRANDS.len()];
        let n_phrases = rng.gen_range(1..=2);
        let mut parts: Vec<&str> = pool.choose_multiple(&mut rng, n_phrases).copied().collect();
        // Mixed reviews: one phrase of the opposite sentiment.
        if rng.gen_bool(MIXED_RATE) {
            parts.push(other.choose(&mut rng).copied().unwrap_or(""));
        }
        for _ in 0..rng.gen_range(0..=2) {
            parts.push(FILLER.choose(&mut rng).copied().unwrap_or(""));
        }
        parts.shuffle(&mut rng);
        let text = decorate(&mut rng, brand, parts.join(" "));
        docs.push(LabeledDocument {
            id: format!("syn-{:05}", i + 1),
            text,
            label,
            brand: Some(brand.to_string()),
        });
    }
    docs
}
