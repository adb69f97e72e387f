//! Random instances for property sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::measure::{Node, TrieMeasure};
use crate::rational::{ratio, Rational};
use crate::word::{Alphabet, EventuallyPeriodic, PrefixFreeSet, Word};
use crate::enumeration::GoodEnumeration;

const DENOMINATORS: [i64; 5] = [1, 2, 3, 5, 7];

fn random_mass<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    ratio(rng.gen_range(0..=6), *DENOMINATORS.choose(rng).unwrap())
}

fn random_word<R: Rng + ?Sized>(alphabet: Alphabet, len: usize, rng: &mut R) -> Word {
    let symbols = (0..len).map(|_| rng.gen_range(0..alphabet.size()) as u8).collect();
    Word::new(symbols, alphabet).unwrap()
}

/// A random trie measure of depth at most `max_depth` with small rational masses.
/// With `atomless = false` some leaves become atoms at random eventually periodic points.
pub fn random_measure<R: Rng + ?Sized>(alphabet: Alphabet, max_depth: usize, atomless: bool, rng: &mut R) -> TrieMeasure {
    fn go<R: Rng + ?Sized>(b: Alphabet, depth: usize, max_depth: usize, atomless: bool, rng: &mut R) -> Node {
        if depth < max_depth && rng.gen_bool(0.55) {
            return Node::branch((0..b.size()).map(|_| go(b, depth + 1, max_depth, atomless, rng)).collect());
        }
        let mass = random_mass(rng);
        if !atomless && rng.gen_bool(0.25) {
            let head_len = rng.gen_range(0..=2);
            let period_len = rng.gen_range(1..=2);
            let at = EventuallyPeriodic::new(random_word(b, head_len, rng), random_word(b, period_len, rng)).unwrap();
            Node::point(mass, at)
        } else {
            Node::uniform(mass)
        }
    }
    TrieMeasure::from_root(alphabet, go(alphabet, 0, max_depth, atomless, rng)).expect("generated trie is additive")
}

/// A random nonempty antichain of depth at most `depth`.
pub fn random_nonempty_antichain<R: Rng + ?Sized>(alphabet: Alphabet, depth: usize, rng: &mut R) -> PrefixFreeSet {
    loop {
        let s = crate::word::random_antichain(alphabet, depth, rng);
        if !s.is_empty() {
            return s;
        }
    }
}

/// The words of `set` in a uniformly random order.
pub fn random_order<R: Rng + ?Sized>(set: &PrefixFreeSet, rng: &mut R) -> GoodEnumeration {
    let mut words: Vec<Word> = set.words().cloned().collect();
    words.shuffle(rng);
    GoodEnumeration::new(set.alphabet(), words).expect("antichain orders are good enumerations")
}
