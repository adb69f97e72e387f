//! Online dynamic weights for good enumerations of prefix-free sets.
//!
//! Words arrive one per stage. The weight `ww^k_t(S)` of the set enumerated so far is updated
//! along the entering word's path only: a new word `σ` starts at `1/|f_{k+|σ|}|`, and every
//! ancestor at depth `d` whose child sum moves from `T_{t-1}` to `T_t` gains
//! `(T_t - T_{t-1}) / (1 + f(k+d) T_t)`. Each stage's increase at the root is spread
//! uniformly over the entering cylinder to build the staged measure `μ^k_S`.

use crate::rational::StrictSign;

use crate::capacity::capacity;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::measure::TrieMeasure;
use crate::rational::{int, ExtValue, Rational};
use crate::word::{all_antichains, Alphabet, EventuallyPeriodic, PrefixFreeSet, Word};

/// An ordered listing of a prefix-free set, one word per stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodEnumeration {
    alphabet: Alphabet,
    order: Vec<Word>,
}

impl GoodEnumeration {
    /// Rejects duplicates and prefix relations, naming the 1-based stage of the offending word.
    pub fn new(alphabet: Alphabet, order: Vec<Word>) -> Result<Self> {
        for (i, w) in order.iter().enumerate() {
            let stage = i + 1;
            Word::new(w.symbols().to_vec(), alphabet).map_err(|e| Error::InvalidEnumeration {
                stage,
                reason: e.to_string(),
            })?;
            for prev in &order[..i] {
                let reason = if prev == w {
                    format!("duplicate word {w}")
                } else if prev.is_prefix_of(w) {
                    format!("{prev} is a prefix of {w}")
                } else if w.is_prefix_of(prev) {
                    format!("{w} is a prefix of {prev}")
                } else {
                    continue;
                };
                return Err(Error::InvalidEnumeration { stage, reason });
            }
        }
        Ok(GoodEnumeration { alphabet, order })
    }

    pub fn parse_words<'a>(alphabet: Alphabet, words: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let order = words
            .into_iter()
            .map(|w| Word::parse(w, alphabet))
            .collect::<Result<Vec<_>>>()?;
        GoodEnumeration::new(alphabet, order)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn order(&self) -> &[Word] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The enumerated set.
    pub fn set(&self) -> PrefixFreeSet {
        PrefixFreeSet::new(self.alphabet, self.order.iter().cloned()).expect("validated on construction")
    }

    /// The enumeration of the first `t` stages.
    pub fn prefix(&self, t: usize) -> GoodEnumeration {
        GoodEnumeration {
            alphabet: self.alphabet,
            order: self.order[..t].to_vec(),
        }
    }
}

/// One stage of a dynamic-weight replay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    /// 1-based stage index.
    pub stage: usize,
    pub word: Word,
    /// `ww_t - ww_{t-1}`.
    pub increment: Rational,
    /// `ww^k_t(S)`.
    pub ww: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicWeightTrace {
    pub shift: usize,
    pub stages: Vec<StageRecord>,
    pub staged_measure: TrieMeasure,
    /// `A = 2 · norm_bound + 2`.
    pub bound_constant: Rational,
    /// `C_{f_k}[S]` of the whole enumerated set.
    pub capacity: Rational,
}

impl DynamicWeightTrace {
    pub fn final_ww(&self) -> Rational {
        self.stages.last().map(|s| s.ww.clone()).unwrap_or(Rational::ZERO)
    }
}

#[derive(Debug, Clone)]
struct WeightNode {
    ww: Rational,
    child_sum: Rational,
    /// Staged-measure mass of this cylinder.
    mass: Rational,
    entered: bool,
    children: Vec<Option<usize>>,
}

impl WeightNode {
    fn new(b: usize) -> Self {
        WeightNode {
            ww: Rational::ZERO,
            child_sum: Rational::ZERO,
            mass: Rational::ZERO,
            entered: false,
            children: vec![None; b],
        }
    }
}

#[derive(Debug, Clone)]
struct PushRecord {
    path: Vec<usize>,
    /// `deltas[d]` is the gain of `ww` at depth `d` of the path.
    deltas: Vec<Rational>,
    created_from: usize,
}

/// The dynamic weight as an online computation: words arrive through [`OnlineWeight::push`],
/// and the most recent pushes can be taken back with [`OnlineWeight::undo`].
///
/// The weight trie doubles as the staged measure's trie, so staged potentials on entered
/// cylinders are available at every stage.
#[derive(Debug, Clone)]
pub struct OnlineWeight {
    kernel: Kernel,
    alphabet: Alphabet,
    shift: usize,
    f: Vec<Rational>,
    tails: Vec<Rational>,
    nodes: Vec<WeightNode>,
    log: Vec<PushRecord>,
}

impl OnlineWeight {
    pub fn new(kernel: &Kernel, shift: usize) -> Result<Self> {
        kernel.require_infinite_support()?;
        let alphabet = kernel.alphabet();
        Ok(OnlineWeight {
            kernel: kernel.clone(),
            alphabet,
            shift,
            f: Vec::new(),
            tails: Vec::new(),
            nodes: vec![WeightNode::new(alphabet.size())],
            log: Vec::new(),
        })
    }

    fn extend_tables(&mut self, len: usize) {
        while self.f.len() < len {
            self.f.push(self.kernel.eval(self.shift + self.f.len()));
        }
        while self.tails.len() <= len {
            self.tails.push(self.kernel.tail_weight(self.shift + self.tails.len()));
        }
    }

    /// Number of words entered so far.
    pub fn stage(&self) -> usize {
        self.log.len()
    }

    /// `ww_t`.
    pub fn ww(&self) -> &Rational {
        &self.nodes[0].ww
    }

    /// Enters `word` and returns the stage increment.
    pub fn push(&mut self, word: &Word) -> Result<Rational> {
        let stage = self.stage() + 1;
        let invalid = |reason: String| Error::InvalidEnumeration { stage, reason };
        Word::new(word.symbols().to_vec(), self.alphabet).map_err(|e| invalid(e.to_string()))?;
        let b = self.alphabet.size();
        let len = word.len();
        let mut path = Vec::with_capacity(len + 1);
        path.push(0usize);
        for (d, &s) in word.symbols().iter().enumerate() {
            let at = path[d];
            if self.nodes[at].entered {
                return Err(invalid(format!("{} is a prefix of {word}", word.prefix(d))));
            }
            match self.nodes[at].children[s as usize] {
                Some(n) => path.push(n),
                None => break,
            }
        }
        if path.len() == len + 1 {
            let node = &self.nodes[path[len]];
            if node.entered {
                return Err(invalid(format!("duplicate word {word}")));
            }
            if node.children.iter().any(Option::is_some) {
                return Err(invalid(format!("{word} is a prefix of an earlier word")));
            }
        }
        let created_from = self.nodes.len();
        for d in path.len() - 1..len {
            self.nodes.push(WeightNode::new(b));
            let n = self.nodes.len() - 1;
            let at = path[d];
            self.nodes[at].children[word.symbols()[d] as usize] = Some(n);
            path.push(n);
        }
        self.extend_tables(len);

        let mut deltas = vec![Rational::ZERO; len + 1];
        let mut delta = Rational::ONE / &self.tails[len];
        let leaf = &mut self.nodes[path[len]];
        leaf.entered = true;
        leaf.ww = delta.clone();
        deltas[len] = delta.clone();
        for d in (0..len).rev() {
            let node = &mut self.nodes[path[d]];
            node.child_sum += &delta;
            delta /= Rational::ONE + &self.f[d] * &node.child_sum;
            node.ww += &delta;
            deltas[d] = delta.clone();
        }
        for &n in &path {
            self.nodes[n].mass += &delta;
        }
        self.log.push(PushRecord {
            path,
            deltas,
            created_from,
        });
        Ok(delta)
    }

    /// Takes back the most recent push; false when nothing is left to undo.
    pub fn undo(&mut self) -> bool {
        let Some(rec) = self.log.pop() else {
            return false;
        };
        let increment = &rec.deltas[0];
        let len = rec.path.len() - 1;
        for (d, &n) in rec.path.iter().enumerate() {
            let node = &mut self.nodes[n];
            node.mass -= increment;
            node.ww -= &rec.deltas[d];
            if d < len {
                node.child_sum -= &rec.deltas[d + 1];
            }
        }
        self.nodes[rec.path[len]].entered = false;
        if rec.created_from < self.nodes.len() {
            let first_new = rec.path.iter().position(|&n| n >= rec.created_from).unwrap();
            let parent = rec.path[first_new - 1];
            for c in self.nodes[parent].children.iter_mut() {
                if *c == Some(rec.path[first_new]) {
                    *c = None;
                }
            }
            self.nodes.truncate(rec.created_from);
        }
        true
    }

    /// Staged-measure potential `P_{f_k} μ_S` on the cylinder of an entered word.
    pub fn staged_potential(&self, word: &Word) -> Option<Rational> {
        let mut acc = Rational::ZERO;
        let mut at = 0;
        for (d, &s) in word.symbols().iter().enumerate() {
            acc += &self.f[d] * &self.nodes[at].mass;
            at = self.nodes[at].children[s as usize]?;
        }
        let node = &self.nodes[at];
        node.entered.then(|| acc + &self.tails[word.len()] * &node.mass)
    }
}

/// Per-stage `(increment, ww)` pairs; the cheap core of [`dynamic_weight`].
pub fn stage_weights(kernel: &Kernel, enumeration: &GoodEnumeration, shift: usize) -> Result<Vec<(Rational, Rational)>> {
    kernel.alphabet().ensure_same(enumeration.alphabet)?;
    let mut online = OnlineWeight::new(kernel, shift)?;
    enumeration
        .order
        .iter()
        .map(|w| {
            let inc = online.push(w)?;
            Ok((inc, online.ww().clone()))
        })
        .collect()
}

/// Replays the dynamic weight over `enumeration` at shift `k`.
pub fn dynamic_weight(kernel: &Kernel, enumeration: &GoodEnumeration, shift: usize) -> Result<DynamicWeightTrace> {
    let stages = stage_records(kernel, enumeration, shift)?;
    let staged_measure = build_staged_measure(enumeration.alphabet, &stages)?;
    Ok(DynamicWeightTrace {
        shift,
        staged_measure,
        bound_constant: kernel.approximation_constant()?,
        capacity: capacity(kernel, &enumeration.set(), shift)?,
        stages,
    })
}

fn stage_records(kernel: &Kernel, enumeration: &GoodEnumeration, shift: usize) -> Result<Vec<StageRecord>> {
    Ok(stage_weights(kernel, enumeration, shift)?
        .into_iter()
        .zip(&enumeration.order)
        .enumerate()
        .map(|(i, ((increment, ww), word))| StageRecord {
            stage: i + 1,
            word: word.clone(),
            increment,
            ww,
        })
        .collect())
}

fn build_staged_measure(alphabet: Alphabet, stages: &[StageRecord]) -> Result<TrieMeasure> {
    let cylinders: Vec<(Word, Rational)> = stages.iter().map(|s| (s.word.clone(), s.increment.clone())).collect();
    TrieMeasure::uniform_on_cylinders(&cylinders, alphabet)
}

/// The staged measure `μ^k_S`: each stage's increase, uniform on the entering cylinder.
pub fn staged_measure(kernel: &Kernel, enumeration: &GoodEnumeration, shift: usize) -> Result<TrieMeasure> {
    let stages = stage_records(kernel, enumeration, shift)?;
    build_staged_measure(enumeration.alphabet, &stages)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichReport {
    pub capacity: Rational,
    pub ww: Rational,
    pub bound_constant: Rational,
    /// `ww / C`, absent for the empty set.
    pub ratio: Option<Rational>,
    /// `C ≤ ww`.
    pub lower_holds: bool,
    /// `ww ≤ A · C`.
    pub upper_holds: bool,
    /// `ww_t` never decreases.
    pub monotone: bool,
    /// `μ_S[λ] = ww`.
    pub mass_matches: bool,
    /// Smallest staged-measure potential over the enumerated cylinders.
    pub min_potential_on_set: Option<ExtValue>,
    /// `P_{f_k} μ_S ≥ 1` on every enumerated cylinder.
    pub potential_holds: bool,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds && self.monotone && self.mass_matches && self.potential_holds
    }
}

/// Checks `C ≤ ww ≤ A·C`, monotonicity, the mass identity and the potential lower bound.
///
/// The staged measure is uniform below each enumerated word and puts no other mass there, so
/// its potential is constant on each enumerated cylinder.
pub fn check_sandwich(kernel: &Kernel, enumeration: &GoodEnumeration, shift: usize) -> Result<SandwichReport> {
    let trace = dynamic_weight(kernel, enumeration, shift)?;
    sandwich_from_trace(kernel, &trace)
}

pub fn sandwich_from_trace(kernel: &Kernel, trace: &DynamicWeightTrace) -> Result<SandwichReport> {
    let ww = trace.final_ww();
    let c = trace.capacity.clone();
    let a = trace.bound_constant.clone();
    let monotone = trace.stages.windows(2).all(|p| p[1].ww >= p[0].ww);
    let one = Rational::ONE;
    let leaves = trace.staged_measure.uniform_leaf_potentials(kernel, trace.shift)?;
    let mut min_potential: Option<ExtValue> = None;
    for s in &trace.stages {
        let at = leaves.partition_point(|(w, _)| *w <= s.word);
        let p = match at.checked_sub(1).map(|i| &leaves[i]) {
            Some((w, p)) if w.is_prefix_of(&s.word) => ExtValue::Finite(p.clone()),
            _ => trace
                .staged_measure
                .potential(kernel, &EventuallyPeriodic::in_cylinder(&s.word), trace.shift)?,
        };
        if min_potential.as_ref().is_none_or(|m| p < *m) {
            min_potential = Some(p);
        }
    }
    Ok(SandwichReport {
        ratio: if c.is_zero() { None } else { Some(&ww / &c) },
        lower_holds: c <= ww,
        upper_holds: ww <= &a * &c,
        monotone,
        mass_matches: trace.staged_measure.total_mass() == &ww,
        potential_holds: min_potential.as_ref().is_none_or(|m| m.ge_rational(&one)),
        min_potential_on_set: min_potential,
        capacity: c,
        ww,
        bound_constant: a,
    })
}

/// Outcome of replaying every order of one set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllOrdersReport {
    pub orders: u64,
    pub capacity: Rational,
    pub bound_constant: Rational,
    pub min_ww: Rational,
    pub max_ww: Rational,
    /// Every stage increment was nonnegative.
    pub monotone: bool,
    /// `μ_S[λ] = ww` at the end of every order.
    pub mass_matches: bool,
    /// The staged potential reached 1 on every cylinder in every order.
    pub potential_holds: bool,
}

impl AllOrdersReport {
    pub fn holds(&self) -> bool {
        self.capacity <= self.min_ww
            && self.max_ww <= &self.bound_constant * &self.capacity
            && self.monotone
            && self.mass_matches
            && self.potential_holds
    }
}

/// Replays all `|S|!` orders of `set`, sharing work between orders with a common prefix.
///
/// Staged potentials only grow, so a word whose potential is already 1 when it enters needs
/// no further check; the others are checked once the order is complete.
pub fn sweep_all_orders(kernel: &Kernel, set: &PrefixFreeSet, shift: usize) -> Result<AllOrdersReport> {
    kernel.alphabet().ensure_same(set.alphabet())?;
    let words: Vec<Word> = set.words().cloned().collect();
    let mut report = AllOrdersReport {
        orders: 0,
        capacity: capacity(kernel, set, shift)?,
        bound_constant: kernel.approximation_constant()?,
        min_ww: Rational::ZERO,
        max_ww: Rational::ZERO,
        monotone: true,
        mass_matches: true,
        potential_holds: true,
    };
    let mut online = OnlineWeight::new(kernel, shift)?;
    let mut used = vec![false; words.len()];
    let mut pending = Vec::new();
    fn go(
        words: &[Word],
        online: &mut OnlineWeight,
        used: &mut [bool],
        pending: &mut Vec<usize>,
        report: &mut AllOrdersReport,
    ) -> Result<()> {
        if online.stage() == words.len() {
            let ww = online.ww().clone();
            if report.orders == 0 || ww < report.min_ww {
                report.min_ww = ww.clone();
            }
            if report.orders == 0 || ww > report.max_ww {
                report.max_ww = ww.clone();
            }
            report.orders += 1;
            report.mass_matches &= online.nodes[0].mass == ww;
            for &i in pending.iter() {
                report.potential_holds &= online.staged_potential(&words[i]).is_some_and(|p| p >= Rational::ONE);
            }
            return Ok(());
        }
        for i in 0..words.len() {
            if used[i] {
                continue;
            }
            let inc = online.push(&words[i])?;
            report.monotone &= !inc.is_negative();
            let settled = online.staged_potential(&words[i]).is_some_and(|p| p >= Rational::ONE);
            if !settled {
                pending.push(i);
            }
            used[i] = true;
            go(words, online, used, pending, report)?;
            used[i] = false;
            if !settled {
                pending.pop();
            }
            online.undo();
        }
        Ok(())
    }
    go(&words, &mut online, &mut used, &mut pending, &mut report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderWitness {
    pub set: PrefixFreeSet,
    pub first: GoodEnumeration,
    pub second: GoodEnumeration,
    pub first_ww: Rational,
    pub second_ww: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSearch {
    pub witness: Option<OrderWitness>,
    pub sets_examined: usize,
    pub orders_examined: usize,
    pub max_depth: usize,
}

/// Antichain counts beyond this make the exhaustive search refuse to start.
pub const WITNESS_SEARCH_MAX_SETS: u128 = 1_000_000;

/// Searches antichains of depth `≤ max_depth`, smallest first, for two orders of the same set
/// with different final weights.
pub fn order_dependence_witness(kernel: &Kernel, max_depth: usize) -> Result<WitnessSearch> {
    let alphabet = kernel.alphabet();
    let mut count: u128 = 2;
    for _ in 0..max_depth {
        count = count
            .checked_pow(alphabet.size() as u32)
            .and_then(|c| c.checked_add(1))
            .filter(|&c| c <= WITNESS_SEARCH_MAX_SETS)
            .ok_or_else(|| Error::TooLarge(format!("antichains of depth {max_depth} over {} symbols", alphabet.size())))?;
    }
    let mut sets = all_antichains(alphabet, max_depth);
    sets.sort_by_key(PrefixFreeSet::len);
    let mut search = WitnessSearch {
        witness: None,
        sets_examined: 0,
        orders_examined: 0,
        max_depth,
    };
    for set in sets.into_iter().filter(|s| s.len() >= 2) {
        search.sets_examined += 1;
        let words: Vec<Word> = set.words().cloned().collect();
        let reference = GoodEnumeration::new(alphabet, words.clone())?;
        let reference_ww = final_weight(kernel, &reference)?;
        search.orders_examined += 1;
        let mut idx: Vec<usize> = (0..words.len()).collect();
        while next_permutation(&mut idx) {
            let order = GoodEnumeration::new(alphabet, idx.iter().map(|&i| words[i].clone()).collect())?;
            let ww = final_weight(kernel, &order)?;
            search.orders_examined += 1;
            if ww != reference_ww {
                search.witness = Some(OrderWitness {
                    set,
                    first: reference,
                    second: order,
                    first_ww: reference_ww,
                    second_ww: ww,
                });
                return Ok(search);
            }
        }
    }
    Ok(search)
}

/// `ww^0(S)` for the whole enumeration.
pub fn final_weight(kernel: &Kernel, enumeration: &GoodEnumeration) -> Result<Rational> {
    Ok(stage_weights(kernel, enumeration, 0)?
        .pop()
        .map(|(_, ww)| ww)
        .unwrap_or(Rational::ZERO))
}

/// Advances `v` to the next lexicographic permutation; false after the last one.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Margin used by [`calc_inequality_check`].
pub const CALC_MARGIN: f64 = 1e-12;

/// Samples `ln(1 + a y) ≤ a y / (1 + y)` at `samples` evenly spaced `y ∈ [0, a - 2]`.
pub fn calc_inequality_check(a: &Rational, samples: usize) -> Result<bool> {
    if *a < int(2) {
        return Err(Error::OutOfRange(format!("a = {a} must be at least 2")));
    }
    if samples == 0 {
        return Err(Error::OutOfRange("need at least one sample".into()));
    }
    let a = crate::rational::to_f64(a);
    let width = a - 2.0;
    Ok((0..samples).all(|i| {
        let y = if samples == 1 { 0.0 } else { width * i as f64 / (samples - 1) as f64 };
        (a * y).ln_1p() <= a * y / (1.0 + y) + CALC_MARGIN
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn b2() -> Alphabet {
        Alphabet::BINARY
    }

    fn geo32() -> Kernel {
        Kernel::geometric(ratio(3, 2), b2()).unwrap()
    }

    fn en(words: &[&str]) -> GoodEnumeration {
        GoodEnumeration::parse_words(b2(), words.iter().copied()).unwrap()
    }

    #[test]
    fn dynamic_weight_examples() {
        assert_eq!(dynamic_weight(&geo32(), &en(&["-"]), 0).unwrap().final_ww(), ratio(1, 4));
        assert_eq!(dynamic_weight(&geo32(), &en(&["0"]), 0).unwrap().final_ww(), ratio(1, 7));

        // Hand trace: stage 1 gives 1/9 → 2/21 → 2/23; stage 2 adds 1/9 → 1/12 → 7/99.
        let trace = dynamic_weight(&geo32(), &en(&["00", "01"]), 0).unwrap();
        assert_eq!(trace.stages[0].ww, ratio(2, 23));
        assert_eq!(trace.stages[1].increment, ratio(7, 99));
        assert_eq!(trace.final_ww(), ratio(359, 2277));
        assert_eq!(trace.capacity, ratio(1, 7));
        assert!(trace.final_ww() > ratio(1, 7));
        assert!(trace.final_ww() <= ratio(1, 3));
    }

    #[test]
    fn invalid_enumerations_name_the_stage() {
        let dup = GoodEnumeration::parse_words(b2(), ["0", "1", "0"]).unwrap_err();
        assert!(matches!(dup, Error::InvalidEnumeration { stage: 3, .. }));
        let prefix = GoodEnumeration::parse_words(b2(), ["01", "0"]).unwrap_err();
        assert!(matches!(prefix, Error::InvalidEnumeration { stage: 2, .. }));
    }

    #[test]
    fn staged_measure_examples() {
        let full = staged_measure(&geo32(), &en(&["-"]), 0).unwrap();
        assert_eq!(full, TrieMeasure::uniform(ratio(1, 4), b2()).unwrap());

        let zero = staged_measure(&geo32(), &en(&["0"]), 0).unwrap();
        assert_eq!(zero.total_mass(), &ratio(1, 7));
        assert_eq!(zero.cylinder_mass(&Word::parse("1", b2()).unwrap()), int(0));
        let p = zero.potential(&geo32(), &EventuallyPeriodic::parse("0:1", b2()).unwrap(), 0).unwrap();
        assert_eq!(p, ExtValue::Finite(int(1)));

        let two = staged_measure(&geo32(), &en(&["00", "01"]), 0).unwrap();
        for x in ["00:1", "01:0"] {
            let p = two.potential(&geo32(), &EventuallyPeriodic::parse(x, b2()).unwrap(), 0).unwrap();
            assert!(p.ge_rational(&int(1)));
        }
    }

    #[test]
    fn sandwich_examples() {
        let r = check_sandwich(&geo32(), &en(&["0"]), 0).unwrap();
        assert!(r.holds());
        assert_eq!(r.bound_constant, ratio(7, 3));
        assert_eq!(r.ratio, Some(int(1)));
        let r = check_sandwich(&geo32(), &en(&["-"]), 0).unwrap();
        assert!(r.holds());
        assert_eq!(&r.bound_constant * &r.capacity, ratio(7, 12));
        let empty = check_sandwich(&geo32(), &en(&[]), 0).unwrap();
        assert!(empty.holds());
        assert_eq!(empty.ratio, None);
    }

    #[test]
    fn symmetric_and_single_sets_are_order_independent() {
        let a = final_weight(&geo32(), &en(&["0", "1"])).unwrap();
        let b = final_weight(&geo32(), &en(&["1", "0"])).unwrap();
        assert_eq!(a, b);
        let search = order_dependence_witness(&geo32(), 1).unwrap();
        assert!(search.witness.is_none());
        assert_eq!(search.sets_examined, 1);
    }

    #[test]
    fn witness_search_finds_order_dependence() {
        let search = order_dependence_witness(&geo32(), 3).unwrap();
        let w = search.witness.expect("some set of depth ≤ 3 depends on the order");
        assert_ne!(w.first_ww, w.second_ww);
        assert_eq!(w.first.set(), w.second.set());
        assert!(order_dependence_witness(&Kernel::geometric(int(2), Alphabet::new(3).unwrap()).unwrap(), 3).is_err());
    }

    #[test]
    fn calc_inequality_examples() {
        assert!(calc_inequality_check(&int(5), 1).unwrap());
        let (a, y) = (4.0f64, 2.0f64);
        assert!((a * y).ln_1p() <= a * y / (1.0 + y));
        assert!(calc_inequality_check(&ratio(7, 3), 1000).unwrap());
        assert!(calc_inequality_check(&int(1), 10).is_err());
    }

    #[test]
    fn permutations() {
        let mut v = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
        assert_eq!(v, vec![2, 1, 0]);
    }

    #[test]
    fn online_undo_restores_every_stage() {
        let e = en(&["010", "1", "00", "0111", "0110"]);
        let mut online = OnlineWeight::new(&geo32(), 1).unwrap();
        let mut seen = vec![online.ww().clone()];
        for w in e.order() {
            online.push(w).unwrap();
            seen.push(online.ww().clone());
        }
        let measure = staged_measure(&geo32(), &e, 1).unwrap();
        for w in e.order() {
            let trie = measure.potential(&geo32(), &EventuallyPeriodic::in_cylinder(w), 1).unwrap();
            assert_eq!(ExtValue::Finite(online.staged_potential(w).unwrap()), trie);
        }
        while online.undo() {
            seen.pop();
            assert_eq!(online.ww(), seen.last().unwrap());
        }
        assert_eq!(online.nodes.len(), 1);
        for w in e.order() {
            online.push(w).unwrap();
        }
        assert_eq!(online.ww(), &dynamic_weight(&geo32(), &e, 1).unwrap().final_ww());
    }

    #[test]
    fn online_rejects_bad_words() {
        let mut online = OnlineWeight::new(&geo32(), 0).unwrap();
        online.push(&Word::parse("01", b2()).unwrap()).unwrap();
        for bad in ["01", "0", "-", "011"] {
            let err = online.push(&Word::parse(bad, b2()).unwrap()).unwrap_err();
            assert!(matches!(err, Error::InvalidEnumeration { stage: 2, .. }), "{bad}: {err}");
        }
        assert_eq!(online.stage(), 1);
        online.push(&Word::parse("00", b2()).unwrap()).unwrap();
    }
}
