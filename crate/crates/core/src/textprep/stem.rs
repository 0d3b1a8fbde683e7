//! Dictionary-free Indonesian affix stripper.
//!
//! One pass removes, in order: an inflectional particle, a possessive
//! pronoun, a derivational suffix, then up to two derivational prefixes.
//! Each category strips at most one affix per pass (two for prefixes).
//! A removal is only accepted if the remaining stem keeps at least three
//! letters and two vowels. The stemmer repeats passes until nothing more
//! can be removed, so its output is always a fixed point.

const PARTICLES: [&str; 4] = ["lah", "kah", "pun", "tah"];
const POSSESSIVES: [&str; 3] = ["nya", "ku", "mu"];
// Longest first.
const DERIVATIONAL_SUFFIXES: [&str; 3] = ["kan", "an", "i"];
const PREFIXES: [&str; 15] = [
    "meng", "meny", "mem", "men", "me", "peng", "peny", "pem", "pen", "pe", "ber", "ter", "di",
    "ke", "se",
];

const MAX_PREFIX_REMOVALS: usize = 2;
pub const MIN_STEM_LEN: usize = 3;
const MIN_STEM_VOWELS: usize = 2;

fn vowel_count(s: &str) -> usize {
    s.bytes()
        .filter(|b| matches!(b, b'a' | b'e' | b'i' | b'o' | b'u'))
        .count()
}

fn acceptable(stem: &str) -> bool {
    stem.len() >= MIN_STEM_LEN && vowel_count(stem) >= MIN_STEM_VOWELS
}

fn strip_suffix<'a>(word: &'a str, suffixes: &[&str]) -> &'a str {
    suffixes
        .iter()
        .filter_map(|s| word.strip_suffix(s))
        .find(|rest| acceptable(rest))
        .unwrap_or(word)
}

fn strip_prefix<'a>(word: &'a str, prefixes: &[&str]) -> &'a str {
    prefixes
        .iter()
        .filter_map(|p| word.strip_prefix(p))
        .find(|rest| acceptable(rest))
        .unwrap_or(word)
}

fn single_pass(word: &str) -> &str {
    let mut w = strip_suffix(word, &PARTICLES);
    w = strip_suffix(w, &POSSESSIVES);
    w = strip_suffix(w, &DERIVATIONAL_SUFFIXES);
    for _ in 0..MAX_PREFIX_REMOVALS {
        let next = strip_prefix(w, &PREFIXES);
        if next.len() == w.len() {
            break;
        }
        w = next;
    }
    w
}

/// Reduces a lowercase word to its stem. Words containing anything other
/// than ASCII lowercase letters (digits, accented letters) are returned
/// unchanged.
pub fn stem_word(word: &str) -> &str {
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word;
    }
    let mut current = word;
    loop {
        let next = single_pass(current);
        if next.len() == current.len() {
            return current;
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(stem_word("jawab"), "jawab");
        assert_eq!(stem_word("layanannya"), "layan");
        assert_eq!(stem_word("membantu"), "bantu");
    }

    #[test]
    fn affix_categories() {
        assert_eq!(stem_word("bukukah"), "buku");
        assert_eq!(stem_word("apapun"), "apa");
        assert_eq!(stem_word("rumahku"), "rumah");
        assert_eq!(stem_word("mengambilkan"), "ambil");
        // No prefix recoding: meng- + vowel keeps the vowel-initial residue.
        assert_eq!(stem_word("mengirim"), "irim");
        assert_eq!(stem_word("pelayanan"), "layan");
        assert_eq!(stem_word("penjual"), "jual");
        assert_eq!(stem_word("berjualan"), "jual");
        assert_eq!(stem_word("dikirim"), "kirim");
        assert_eq!(stem_word("bantuan"), "bantu");
    }

    #[test]
    fn floor_blocks_short_or_vowel_poor_stems() {
        // "lay" and "ikl" have one vowel.
        assert_eq!(stem_word("layan"), "layan");
        assert_eq!(stem_word("iklan"), "iklan");
        // "ak" is too short for either suffix.
        assert_eq!(stem_word("akan"), "akan");
        assert_eq!(stem_word("beli"), "beli");
        assert_eq!(stem_word("dia"), "dia");
    }

    #[test]
    fn non_ascii_or_digits_untouched() {
        assert_eq!(stem_word("tokopedia123"), "tokopedia123");
        assert_eq!(stem_word("pelayanané"), "pelayanané");
        assert_eq!(stem_word(""), "");
    }

    proptest! {
        #[test]
        fn idempotent_never_empty_never_longer(w in "[a-z]{1,16}") {
            let s = stem_word(&w);
            prop_assert!(!s.is_empty());
            prop_assert!(s.len() <= w.len());
            prop_assert_eq!(stem_word(s), s);
        }

        #[test]
        fn affixed_words_are_fixed_points(
            pre in prop::sample::select(vec!["", "me", "mem", "di", "ke", "se", "ber", "pe", "peng"]),
            root in "[a-z]{2,8}",
            suf in prop::sample::select(vec!["", "kan", "an", "i", "nya", "lah", "annya", "kanlah"]),
        ) {
            let w = format!("{pre}{root}{suf}");
            let s = stem_word(&w);
            prop_assert_eq!(stem_word(s), s);
            prop_assert!(s.len() >= MIN_STEM_LEN.min(w.len()));
        }
    }
}
