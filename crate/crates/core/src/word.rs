//! Alphabets, finite words, eventually periodic sequences and prefix-free sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Text form of the empty word in word-list files and reports.
pub const EMPTY_WORD: &str = "-";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(usize);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(size: usize) -> Result<Self> {
        if (2..=36).contains(&size) {
            Ok(Alphabet(size))
        } else {
            Err(Error::InvalidAlphabet(size))
        }
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub(crate) fn ensure_same(self, other: Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(self.0, other.0))
        }
    }

    /// All words of length exactly `len`, in lexicographic order.
    pub fn words_of_length(self, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| (0..self.0 as u8).map(move |s| w.child(s)))
                .collect();
        }
        out
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::BINARY
    }
}

/// A finite word over `{0, ..., b-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(symbols: Vec<u8>, alphabet: Alphabet) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= alphabet.size()) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as usize,
                alphabet: alphabet.size(),
            });
        }
        Ok(Word(symbols))
    }

    /// Parses a digit string; `-` and `λ` denote the empty word.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        let text = text.trim();
        if text == EMPTY_WORD || text == "λ" {
            return Ok(Word::empty());
        }
        let symbols = text
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("bad symbol {c:?} in word {text:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::new(symbols, alphabet)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, symbol: u8) -> Word {
        let mut v = self.0.clone();
        v.push(symbol);
        Word(v)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    /// The word with its first symbol removed, and that symbol.
    pub fn split_first(&self) -> Option<(u8, Word)> {
        self.0.split_first().map(|(&h, t)| (h, Word(t.to_vec())))
    }

    /// Digit-string form (digits in base 36); the empty word prints as `-`.
    pub fn to_text(&self) -> String {
        if self.0.is_empty() {
            return EMPTY_WORD.to_string();
        }
        self.digits()
    }

    fn digits(&self) -> String {
        self.0
            .iter()
            .map(|&s| std::char::from_digit(s as u32, 36).expect("symbol < 36"))
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The sequence `head · period^ω`.
#[derive(Debug, Clone)]
pub struct EventuallyPeriodic {
    head: Vec<u8>,
    period: Vec<u8>,
}

impl EventuallyPeriodic {
    pub fn new(head: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("period of an eventually periodic sequence must be nonempty".into()));
        }
        Ok(EventuallyPeriodic {
            head: head.0,
            period: period.0,
        })
    }

    /// The constant sequence `s^ω`.
    pub fn constant(symbol: u8) -> Self {
        EventuallyPeriodic {
            head: Vec::new(),
            period: vec![symbol],
        }
    }

    /// `word · 0^ω`, a representative point of the cylinder `[word]`.
    pub fn in_cylinder(word: &Word) -> Self {
        EventuallyPeriodic {
            head: word.0.clone(),
            period: vec![0],
        }
    }

    /// Parses `HEAD:PERIOD`, e.g. `01:10` for `01(10)^ω` or `:0` for `0^ω`.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        let (head, period) = text
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("point {text:?} is not of the form HEAD:PERIOD")))?;
        let head = if head.is_empty() { Word::empty() } else { Word::parse(head, alphabet)? };
        if period.is_empty() {
            return Err(Error::Parse(format!("point {text:?} has an empty period")));
        }
        EventuallyPeriodic::new(head, Word::parse(period, alphabet)?)
    }

    pub fn head(&self) -> Word {
        Word(self.head.clone())
    }

    pub fn period(&self) -> Word {
        Word(self.period.clone())
    }

    pub fn check_alphabet(&self, alphabet: Alphabet) -> Result<()> {
        Word::new(self.head.clone(), alphabet)?;
        Word::new(self.period.clone(), alphabet)?;
        Ok(())
    }

    pub fn symbol_at(&self, i: usize) -> u8 {
        if i < self.head.len() {
            self.head[i]
        } else {
            self.period[(i - self.head.len()) % self.period.len()]
        }
    }

    /// The first `n` symbols.
    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.symbol_at(i)).collect())
    }

    /// The sequence with its first `n` symbols dropped.
    pub fn drop(&self, n: usize) -> EventuallyPeriodic {
        if n <= self.head.len() {
            EventuallyPeriodic {
                head: self.head[n..].to_vec(),
                period: self.period.clone(),
            }
        } else {
            let p = self.period.len();
            let r = (n - self.head.len()) % p;
            let mut period = self.period[r..].to_vec();
            period.extend_from_slice(&self.period[..r]);
            EventuallyPeriodic {
                head: Vec::new(),
                period,
            }
        }
    }

    /// Length of the longest common prefix, or `None` when the sequences are equal.
    pub fn common_prefix_len(&self, other: &EventuallyPeriodic) -> Option<usize> {
        let bound = self.head.len().max(other.head.len())
            + lcm(self.period.len(), other.period.len());
        (0..bound).find(|&i| self.symbol_at(i) != other.symbol_at(i))
    }

    /// Whether `word` is a prefix of this sequence.
    pub fn starts_with(&self, word: &Word) -> bool {
        word.0.iter().enumerate().all(|(i, &s)| self.symbol_at(i) == s)
    }

    pub fn to_text(&self) -> String {
        format!("{}:{}", Word(self.head.clone()).digits(), Word(self.period.clone()).digits())
    }
}

impl PartialEq for EventuallyPeriodic {
    fn eq(&self, other: &Self) -> bool {
        self.common_prefix_len(other).is_none()
    }
}

impl Eq for EventuallyPeriodic {}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A finite antichain of words; `[S]` is the union of its cylinders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixFreeSet {
    alphabet: Alphabet,
    words: BTreeSet<Word>,
}

impl PrefixFreeSet {
    pub fn empty(alphabet: Alphabet) -> Self {
        PrefixFreeSet {
            alphabet,
            words: BTreeSet::new(),
        }
    }

    /// The whole space, `{λ}`.
    pub fn full(alphabet: Alphabet) -> Self {
        PrefixFreeSet {
            alphabet,
            words: BTreeSet::from([Word::empty()]),
        }
    }

    pub fn new(alphabet: Alphabet, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        for w in &words {
            Word::new(w.0.clone(), alphabet)?;
        }
        // In lexicographic order a prefix sorts directly before some extension of it,
        // so checking neighbours is enough.
        let v: Vec<&Word> = words.iter().collect();
        for pair in v.windows(2) {
            if pair[0].is_prefix_of(pair[1]) {
                return Err(Error::NotPrefixFree(pair[0].to_text(), pair[1].to_text()));
            }
        }
        Ok(PrefixFreeSet { alphabet, words })
    }

    pub fn parse_words<'a>(alphabet: Alphabet, words: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let words = words
            .into_iter()
            .map(|w| Word::parse(w, alphabet))
            .collect::<Result<Vec<_>>>()?;
        PrefixFreeSet::new(alphabet, words)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains_empty_word(&self) -> bool {
        self.words.contains(&Word::empty())
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// The slice `S_i = { τ : iτ ∈ S }`.
    pub fn child_slice(&self, symbol: u8) -> PrefixFreeSet {
        let words = self
            .words
            .iter()
            .filter_map(|w| match w.split_first() {
                Some((h, t)) if h == symbol => Some(t),
                _ => None,
            })
            .collect();
        PrefixFreeSet {
            alphabet: self.alphabet,
            words,
        }
    }

    /// Whether the cylinder `[w]` lies inside `[S]`.
    pub fn covers(&self, w: &Word) -> bool {
        self.words.iter().any(|s| s.is_prefix_of(w))
    }

    /// Whether `[self] ⊆ [other]`.
    pub fn is_covered_by(&self, other: &PrefixFreeSet) -> bool {
        self.words.iter().all(|w| other.covers(w))
    }
}

/// Every prefix-free set of words of length at most `depth`, including the empty set.
pub fn all_antichains(alphabet: Alphabet, depth: usize) -> Vec<PrefixFreeSet> {
    antichains_below(alphabet, depth)
        .into_iter()
        .map(|words| PrefixFreeSet {
            alphabet,
            words: words.into_iter().collect(),
        })
        .collect()
}

fn antichains_below(alphabet: Alphabet, depth: usize) -> Vec<Vec<Word>> {
    // An antichain is either {λ} or a tuple of antichains, one per child.
    let mut result = vec![vec![Word::empty()]];
    if depth == 0 {
        result.push(Vec::new());
        return result;
    }
    let sub = antichains_below(alphabet, depth - 1);
    let mut combos: Vec<Vec<Word>> = vec![Vec::new()];
    for symbol in 0..alphabet.size() as u8 {
        let mut next = Vec::with_capacity(combos.len() * sub.len());
        for c in &combos {
            for s in &sub {
                let mut v = c.clone();
                v.extend(s.iter().map(|w| {
                    let mut sym = vec![symbol];
                    sym.extend_from_slice(w.symbols());
                    Word(sym)
                }));
                next.push(v);
            }
        }
        combos = next;
    }
    result.extend(combos);
    result
}

/// A uniformly random word-tree antichain: each node at depth `< depth` stops, branches, or is
/// left empty, using `rng`.
pub fn random_antichain<R: rand::Rng + ?Sized>(alphabet: Alphabet, depth: usize, rng: &mut R) -> PrefixFreeSet {
    let mut words = BTreeSet::new();
    let mut stack = vec![Word::empty()];
    while let Some(w) = stack.pop() {
        let roll: f64 = rng.gen();
        if w.len() == depth {
            if roll < 0.6 {
                words.insert(w);
            }
        } else if roll < 0.15 && !w.is_empty() {
            words.insert(w);
        } else if roll < 0.3 && !w.is_empty() {
            // empty subtree
        } else {
            for s in 0..alphabet.size() as u8 {
                stack.push(w.child(s));
            }
        }
    }
    PrefixFreeSet { alphabet, words }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antichain_counts_match_recurrence() {
        // a(0) = 2, a(d) = a(d-1)^b + 1
        assert_eq!(all_antichains(Alphabet::BINARY, 0).len(), 2);
        assert_eq!(all_antichains(Alphabet::BINARY, 1).len(), 5);
        assert_eq!(all_antichains(Alphabet::BINARY, 2).len(), 26);
        assert_eq!(all_antichains(Alphabet::BINARY, 3).len(), 677);
        assert_eq!(all_antichains(Alphabet::new(3).unwrap(), 2).len(), 730);
        for s in all_antichains(Alphabet::BINARY, 3) {
            PrefixFreeSet::new(s.alphabet(), s.words().cloned()).unwrap();
        }
    }

    #[test]
    fn prefix_violation_is_rejected() {
        let err = PrefixFreeSet::parse_words(Alphabet::BINARY, ["0", "01"]).unwrap_err();
        assert_eq!(err, Error::NotPrefixFree("0".into(), "01".into()));
        assert!(PrefixFreeSet::parse_words(Alphabet::BINARY, ["2"]).is_err());
    }

    #[test]
    fn periodic_sequences() {
        let b = Alphabet::BINARY;
        let x = EventuallyPeriodic::parse("01:10", b).unwrap();
        assert_eq!(x.prefix(7).to_text(), "0110101");
        assert_eq!(x.drop(3).prefix(4).to_text(), "0101");
        let y = EventuallyPeriodic::parse("0110:10", b).unwrap();
        assert_eq!(x, y);
        let z = EventuallyPeriodic::parse(":0", b).unwrap();
        assert_eq!(x.common_prefix_len(&z), Some(1));
        assert!(EventuallyPeriodic::parse("01:", b).is_err());
        let w = EventuallyPeriodic::parse(":01", b).unwrap();
        let v = EventuallyPeriodic::parse("0:10", b).unwrap();
        assert_eq!(w, v);
    }

    #[test]
    fn child_slices() {
        let s = PrefixFreeSet::parse_words(Alphabet::BINARY, ["00", "01", "1"]).unwrap();
        assert_eq!(s.child_slice(0), PrefixFreeSet::parse_words(Alphabet::BINARY, ["0", "1"]).unwrap());
        assert!(s.child_slice(1).contains_empty_word());
    }
}
