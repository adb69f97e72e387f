//! Invariant sweeps behind the `verify` command.
//!
//! Every property runs on seeded random instances, so reports are reproducible.

use std::fmt;


use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capacity::{
    capacity, capacity_lp_oracle_with_limit, capacity_s, certify_realizer, realizing_measure, refine_to_depth,
};
use crate::enumeration::{
    calc_inequality_check, check_sandwich, dynamic_weight, sweep_all_orders, GoodEnumeration,
};
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::measure::TrieMeasure;
use crate::random::{random_measure, random_nonempty_antichain, random_order};
use crate::rational::{int, pow, ratio, Rational, RationalSum};
use crate::word::{all_antichains, random_antichain, Alphabet, EventuallyPeriodic, PrefixFreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Measure,
    Capacity,
    Enumeration,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Measure, Suite::Capacity, Suite::Enumeration];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Measure => "measure",
            Suite::Capacity => "capacity",
            Suite::Enumeration => "enumeration",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub suite: Suite,
    pub name: &'static str,
    /// `None` on success, otherwise the first counterexample or error.
    pub failure: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS {}::{}", self.suite.name(), self.name),
            Some(why) => write!(f, "FAIL {}::{}: {why}", self.suite.name(), self.name),
        }
    }
}

type Check = fn() -> Result<Option<String>>;

/// Runs the given suites in declaration order.
pub fn run(suites: &[Suite]) -> Vec<PropertyResult> {
    let mut out = Vec::new();
    for &suite in &Suite::ALL {
        if !suites.contains(&suite) {
            continue;
        }
        let checks: &[(&'static str, Check)] = match suite {
            Suite::Measure => MEASURE,
            Suite::Capacity => CAPACITY,
            Suite::Enumeration => ENUMERATION,
        };
        for (name, check) in checks {
            let failure = match check() {
                Ok(f) => f,
                Err(e) => Some(format!("error: {e}")),
            };
            out.push(PropertyResult { suite, name, failure });
        }
    }
    out
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn kernels() -> Vec<Kernel> {
    let b = Alphabet::BINARY;
    vec![
        Kernel::geometric(ratio(3, 2), b).unwrap(),
        Kernel::geometric(int(1), b).unwrap(),
        Kernel::polynomial(1, b),
    ]
}

const MEASURE: &[(&str, Check)] = &[
    ("tail_weight_shift_consistency", tail_weight_shift_consistency),
    ("geometric_tail_ratio", geometric_tail_ratio),
    ("norm_bound_soundness", norm_bound_soundness),
    ("partial_sum_decomposition", partial_sum_decomposition),
    ("additivity", additivity),
    ("energy_is_self_mutual_energy", energy_is_self_mutual_energy),
    ("mutual_energy_symmetry", mutual_energy_symmetry),
    ("jensen_lower_bound", jensen_lower_bound),
    ("scaling", scaling),
];

fn tail_weight_shift_consistency() -> Result<Option<String>> {
    for kernel in kernels() {
        for k in 0..20 {
            if kernel.tail_weight(k) != Kernel::shift(kernel.clone(), k).tail_weight(0) {
                return Ok(Some(format!("{kernel:?} at k={k}")));
            }
        }
    }
    Ok(None)
}

fn geometric_tail_ratio() -> Result<Option<String>> {
    for r in [ratio(3, 2), int(1), ratio(1, 3)] {
        let kernel = Kernel::geometric(r.clone(), Alphabet::BINARY)?;
        for k in 0..=20 {
            if kernel.tail_weight(k + 1) != &r * kernel.tail_weight(k) {
                return Ok(Some(format!("r={r} k={k}")));
            }
        }
    }
    Ok(None)
}

fn norm_bound_soundness() -> Result<Option<String>> {
    for kernel in kernels() {
        let bound = kernel.norm_bound()?;
        for k in 0..=50 {
            if kernel.eval(k) / kernel.tail_weight(k + 1) > bound {
                return Ok(Some(format!("{kernel:?} at k={k}")));
            }
        }
    }
    Ok(None)
}

fn partial_sum_decomposition() -> Result<Option<String>> {
    const N: usize = 10;
    for kernel in kernels() {
        let b = Rational::from(kernel.alphabet().size());
        for k in 0..10 {
            let head: Rational = (0..N).map(|n| kernel.eval(n + k) / pow(&b, n)).total();
            let rest = Kernel::shift(kernel.clone(), k + N).tail_weight(0) / pow(&b, N);
            if head + rest != kernel.tail_weight(k) {
                return Ok(Some(format!("{kernel:?} at k={k}")));
            }
        }
    }
    Ok(None)
}

fn random_measures(seed: u64, count: usize, atomless: bool) -> Vec<TrieMeasure> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| random_measure(Alphabet::BINARY, 4, atomless, &mut r))
        .collect()
}

fn additivity() -> Result<Option<String>> {
    let mut r = rng(11);
    for _ in 0..100 {
        let mu = random_measure(Alphabet::BINARY, 4, false, &mut r);
        let nu = random_measure(Alphabet::BINARY, 4, true, &mut r);
        let c = ratio(r.gen_range(1..=9), r.gen_range(1..=9));
        let derived = [
            mu.scale(&c)?,
            mu.child_measure(0),
            mu.child_measure(1),
            match nu.add(&mu) {
                Ok(sum) => sum,
                Err(Error::MixedTails(_)) => nu.clone(),
                Err(e) => return Err(e),
            },
        ];
        if let Some(bad) = derived.iter().find(|m| !m.is_additive()) {
            return Ok(Some(format!("{bad:?}")));
        }
    }
    Ok(None)
}

fn energy_is_self_mutual_energy() -> Result<Option<String>> {
    for kernel in kernels() {
        for mu in random_measures(12, 100, false) {
            if mu.energy(&kernel)? != mu.mutual_energy(&kernel, &mu)? {
                return Ok(Some(format!("{kernel:?} {mu:?}")));
            }
        }
    }
    Ok(None)
}

fn mutual_energy_symmetry() -> Result<Option<String>> {
    let ms = random_measures(13, 60, false);
    for kernel in kernels() {
        for pair in ms.chunks(2) {
            if pair[0].mutual_energy(&kernel, &pair[1])? != pair[1].mutual_energy(&kernel, &pair[0])? {
                return Ok(Some(format!("{kernel:?} {pair:?}")));
            }
        }
    }
    Ok(None)
}

fn jensen_lower_bound() -> Result<Option<String>> {
    for kernel in kernels() {
        for mu in random_measures(14, 100, true) {
            let m = mu.total_mass();
            if !mu.energy(&kernel)?.ge_rational(&(m * m * kernel.norm())) {
                return Ok(Some(format!("{kernel:?} {mu:?}")));
            }
        }
    }
    Ok(None)
}

fn scaling() -> Result<Option<String>> {
    let c = ratio(5, 3);
    let x = EventuallyPeriodic::parse("01:1", Alphabet::BINARY)?;
    for kernel in kernels() {
        for mu in random_measures(15, 100, false) {
            let scaled = mu.scale(&c)?;
            if scaled.energy(&kernel)? != mu.energy(&kernel)?.scale(&(&c * &c)) {
                return Ok(Some(format!("energy: {kernel:?} {mu:?}")));
            }
            if scaled.potential(&kernel, &x, 0)? != mu.potential(&kernel, &x, 0)?.scale(&c) {
                return Ok(Some(format!("potential: {kernel:?} {mu:?}")));
            }
        }
    }
    Ok(None)
}

const CAPACITY: &[(&str, Check)] = &[
    ("monotonicity", monotonicity),
    ("upper_bound", upper_bound),
    ("shift_scaling", shift_scaling),
    ("oracle_equivalence_binary", oracle_equivalence_binary),
    ("oracle_equivalence_ternary", oracle_equivalence_ternary),
    ("realizer_certificates", realizer_certificates),
    ("decomposition_independence", decomposition_independence),
    ("capacity_s_agreement", capacity_s_agreement),
];

fn monotonicity() -> Result<Option<String>> {
    let mut r = rng(21);
    for kernel in kernels() {
        for _ in 0..200 {
            let big = random_nonempty_antichain(Alphabet::BINARY, 4, &mut r);
            let small = PrefixFreeSet::new(big.alphabet(), big.words().filter(|_| r.gen_bool(0.5)).cloned())?;
            if capacity(&kernel, &small, 0)? > capacity(&kernel, &big, 0)? {
                return Ok(Some(format!("{small:?} ⊆ {big:?}")));
            }
        }
    }
    Ok(None)
}

fn upper_bound() -> Result<Option<String>> {
    for kernel in kernels() {
        let cap = Rational::ONE / kernel.norm();
        for s in all_antichains(Alphabet::BINARY, 3) {
            if capacity(&kernel, &s, 0)? > cap {
                return Ok(Some(format!("{kernel:?} {s:?}")));
            }
        }
    }
    Ok(None)
}

fn shift_scaling() -> Result<Option<String>> {
    for r in [ratio(3, 2), int(1), ratio(1, 2)] {
        let kernel = Kernel::geometric(r.clone(), Alphabet::BINARY)?;
        for s in all_antichains(Alphabet::BINARY, 3) {
            if capacity(&kernel, &s, 1)? != capacity(&kernel, &s, 0)? / &r {
                return Ok(Some(format!("r={r} {s:?}")));
            }
        }
    }
    Ok(None)
}

fn oracle_equivalence(kernel: &Kernel, depth: usize) -> Result<Option<String>> {
    for s in all_antichains(kernel.alphabet(), depth) {
        let c = capacity(kernel, &s, 0)?;
        let lp = capacity_lp_oracle_with_limit(kernel, &s, depth)?;
        if c != lp {
            return Ok(Some(format!("{kernel:?} {s:?}: recursion {c}, oracle {lp}")));
        }
    }
    Ok(None)
}

fn oracle_equivalence_binary() -> Result<Option<String>> {
    for kernel in kernels() {
        if let Some(f) = oracle_equivalence(&kernel, 3)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

fn oracle_equivalence_ternary() -> Result<Option<String>> {
    oracle_equivalence(&Kernel::geometric(int(2), Alphabet::new(3)?)?, 2)
}

fn realizer_certificates() -> Result<Option<String>> {
    let mut r = rng(22);
    for kernel in kernels() {
        for _ in 0..100 {
            let s = random_antichain(Alphabet::BINARY, 4, &mut r);
            let shift = r.gen_range(0..3);
            let result = realizing_measure(&kernel, &s, shift)?;
            let cert = certify_realizer(&kernel, &s, shift, &result)?;
            if !cert.holds() {
                return Ok(Some(format!("{kernel:?} {s:?} shift={shift}: {cert:?}")));
            }
        }
    }
    Ok(None)
}

/// Capacity assembled from the subtrees `levels` deep, each computed on its own shifted kernel.
fn split_capacity(kernel: &Kernel, set: &PrefixFreeSet, shift: usize, levels: usize) -> Result<Rational> {
    if levels == 0 || set.is_empty() || set.contains_empty_word() {
        return capacity(kernel, set, shift);
    }
    let mut total = Rational::ZERO;
    for i in 0..set.alphabet().size() as u8 {
        total += split_capacity(kernel, &set.child_slice(i), shift + 1, levels - 1)?;
    }
    Ok(&total / (Rational::ONE + kernel.eval(shift) * &total))
}

fn decomposition_independence() -> Result<Option<String>> {
    let mut r = rng(23);
    for kernel in kernels() {
        for _ in 0..100 {
            let s = random_antichain(Alphabet::BINARY, 5, &mut r);
            let one = split_capacity(&kernel, &s, 0, 1)?;
            let two = split_capacity(&kernel, &s, 0, 2)?;
            let refined = capacity(&kernel, &refine_to_depth(&s, 5)?, 0)?;
            if one != two || one != refined {
                return Ok(Some(format!("{kernel:?} {s:?}")));
            }
        }
    }
    Ok(None)
}

fn capacity_s_agreement() -> Result<Option<String>> {
    let mut r = rng(24);
    for q in [ratio(3, 2), ratio(5, 4), ratio(7, 4)] {
        let kernel = Kernel::geometric(q.clone(), Alphabet::BINARY)?;
        for _ in 0..100 {
            let s = random_antichain(Alphabet::BINARY, 5, &mut r);
            if capacity_s(&s, &q)? != capacity(&kernel, &s, 0)? {
                return Ok(Some(format!("r={q} {s:?}")));
            }
        }
    }
    Ok(None)
}

const ENUMERATION: &[(&str, Check)] = &[
    ("sandwich_exhaustive_depth3", sandwich_exhaustive),
    ("sandwich_random_depth5", sandwich_random),
    ("single_word_exact", single_word_exact),
    ("permutation_bound", permutation_bound),
    ("stage_locality", stage_locality),
    ("calc_inequality", calc_inequality),
];

fn sandwich_exhaustive() -> Result<Option<String>> {
    let mut r = rng(31);
    for kernel in kernels() {
        for s in all_antichains(Alphabet::BINARY, 3) {
            if s.is_empty() {
                continue;
            }
            let e = random_order(&s, &mut r);
            let report = check_sandwich(&kernel, &e, 0)?;
            if !report.holds() {
                return Ok(Some(format!("{kernel:?} {:?}: {report:?}", e.order())));
            }
        }
    }
    Ok(None)
}

fn sandwich_random() -> Result<Option<String>> {
    let mut r = rng(32);
    for kernel in kernels() {
        for _ in 0..300 {
            let s = random_nonempty_antichain(Alphabet::BINARY, 5, &mut r);
            let e = random_order(&s, &mut r);
            let shift = r.gen_range(0..3);
            let report = check_sandwich(&kernel, &e, shift)?;
            if !report.holds() {
                return Ok(Some(format!("{kernel:?} {:?} shift={shift}: {report:?}", e.order())));
            }
        }
    }
    Ok(None)
}

fn single_word_exact() -> Result<Option<String>> {
    for kernel in kernels() {
        for len in 0..=5 {
            for w in Alphabet::BINARY.words_of_length(len) {
                let e = GoodEnumeration::new(Alphabet::BINARY, vec![w.clone()])?;
                let trace = dynamic_weight(&kernel, &e, 0)?;
                if trace.final_ww() != trace.capacity {
                    return Ok(Some(format!("{kernel:?} {w}")));
                }
            }
        }
    }
    Ok(None)
}

fn permutation_bound() -> Result<Option<String>> {
    let mut r = rng(33);
    for kernel in kernels() {
        for _ in 0..20 {
            let s = random_nonempty_antichain(Alphabet::BINARY, 4, &mut r);
            let mut words: Vec<_> = s.words().cloned().collect();
            words.shuffle(&mut r);
            words.truncate(6);
            let s = PrefixFreeSet::new(Alphabet::BINARY, words)?;
            let report = sweep_all_orders(&kernel, &s, 0)?;
            if !report.holds() {
                return Ok(Some(format!("{kernel:?} {s:?}: {report:?}")));
            }
        }
    }
    Ok(None)
}

fn stage_locality() -> Result<Option<String>> {
    let mut r = rng(34);
    for kernel in kernels() {
        for _ in 0..50 {
            let s = random_nonempty_antichain(Alphabet::BINARY, 5, &mut r);
            let e = random_order(&s, &mut r);
            let full = dynamic_weight(&kernel, &e, 0)?;
            for t in 0..=e.len() {
                let partial = dynamic_weight(&kernel, &e.prefix(t), 0)?;
                if partial.stages[..] != full.stages[..t] {
                    return Ok(Some(format!("{kernel:?} {:?} t={t}", e.order())));
                }
            }
        }
    }
    Ok(None)
}

fn calc_inequality() -> Result<Option<String>> {
    for a in [int(2), ratio(7, 3), int(4), int(10)] {
        if !calc_inequality_check(&a, 1000)? {
            return Ok(Some(format!("a={a}")));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_ordered_by_suite() {
        let results = run(&[Suite::Enumeration, Suite::Measure]);
        assert_eq!(results.len(), MEASURE.len() + ENUMERATION.len());
        assert_eq!(results[0].suite, Suite::Measure);
        assert_eq!(results.last().unwrap().suite, Suite::Enumeration);
        for r in &results {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn capacity_suite_passes() {
        for r in run(&[Suite::Capacity]) {
            assert!(r.passed(), "{r}");
        }
    }
}
