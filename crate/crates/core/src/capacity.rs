//! f-capacity of clopen sets `[S]`.
//!
//! The capacity is computed by the child recursion
//! `C_{f_k}(U) = T / (1 + f(k) T)` with `T = Σ_i C_{f_{k+1}}(U_i)`, bottoming out at
//! `C_{f_k}(∅) = 0` and `C_{f_k}(A^ω) = 1/|f_k|`. The same recursion builds the realizing
//! measure. [`capacity_lp_oracle`] recomputes the value from the definition as a linear program.



use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::lp::{self, LpOutcome};
use crate::measure::{Node, TrieMeasure};
use crate::rational::{int, pow, ratio, ExtValue, Rational, RationalSum};
use crate::word::{Alphabet, EventuallyPeriodic, PrefixFreeSet, Word};

/// Default depth limit of [`capacity_lp_oracle`].
pub const DEFAULT_ORACLE_MAX_DEPTH: usize = 6;
/// The oracle never builds more than this many variables.
pub const ORACLE_MAX_VARIABLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityResult {
    pub value: Rational,
    pub realizer: TrieMeasure,
}

fn check_inputs(kernel: &Kernel, set: &PrefixFreeSet) -> Result<()> {
    kernel.require_infinite_support()?;
    kernel.alphabet().ensure_same(set.alphabet())
}

/// `C_{f_k}[S]`, exactly.
pub fn capacity(kernel: &Kernel, set: &PrefixFreeSet, shift: usize) -> Result<Rational> {
    check_inputs(kernel, set)?;
    Ok(capacity_rec(kernel, set, shift))
}

fn capacity_rec(kernel: &Kernel, set: &PrefixFreeSet, k: usize) -> Rational {
    if set.is_empty() {
        return Rational::ZERO;
    }
    if set.contains_empty_word() {
        return Rational::ONE / kernel.tail_weight(k);
    }
    let total: Rational = (0..set.alphabet().size() as u8)
        .map(|i| capacity_rec(kernel, &set.child_slice(i), k + 1))
        .total();
    let denom = Rational::ONE + kernel.eval(k) * &total;
    total / denom
}

/// The measure realizing `C_{f_k}[S]`: uniform below each word of `S`, zero off `[S]`.
pub fn realizing_measure(kernel: &Kernel, set: &PrefixFreeSet, shift: usize) -> Result<CapacityResult> {
    check_inputs(kernel, set)?;
    let root = realizer_rec(kernel, set, shift);
    let value = root.mass().clone();
    let realizer = TrieMeasure::from_root(set.alphabet(), root)?;
    Ok(CapacityResult { value, realizer })
}

fn realizer_rec(kernel: &Kernel, set: &PrefixFreeSet, k: usize) -> Node {
    if set.is_empty() {
        return Node::zero();
    }
    if set.contains_empty_word() {
        return Node::uniform(Rational::ONE / kernel.tail_weight(k));
    }
    let children: Vec<Node> = (0..set.alphabet().size() as u8)
        .map(|i| realizer_rec(kernel, &set.child_slice(i), k + 1))
        .collect();
    let total: Rational = children.iter().map(|c| c.mass().clone()).total();
    let factor = Rational::ONE / (Rational::ONE + kernel.eval(k) * total);
    Node::branch(children.into_iter().map(|c| scale_node(c, &factor)).collect())
}

fn scale_node(n: Node, c: &Rational) -> Node {
    match n {
        Node::Leaf { mass, tail } => Node::Leaf { mass: mass * c, tail },
        Node::Branch { mass, children } => Node::Branch {
            mass: mass * c,
            children: children.into_iter().map(|x| scale_node(x, c)).collect(),
        },
    }
}

/// The three realizer clauses, each checked exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizerCertificate {
    /// `μ([S]) = C`.
    pub mass_matches: bool,
    /// The potential is exactly 1 on every cylinder of `S`.
    pub potential_one_on_set: bool,
    /// The potential is at most 1 everywhere.
    pub potential_at_most_one: bool,
    pub max_potential: ExtValue,
}

impl RealizerCertificate {
    pub fn holds(&self) -> bool {
        self.mass_matches && self.potential_one_on_set && self.potential_at_most_one
    }
}

/// Checks the realizer clauses for `result` against `S` at shift `k`.
///
/// The realizer is uniform (or zero) below every leaf of its trie, so its potential is
/// constant on each leaf cylinder; one representative point per cylinder settles each
/// quantifier.
pub fn certify_realizer(
    kernel: &Kernel,
    set: &PrefixFreeSet,
    shift: usize,
    result: &CapacityResult,
) -> Result<RealizerCertificate> {
    let mu = &result.realizer;
    let on_set: Rational = set.words().map(|w| mu.cylinder_mass(w)).total();
    let one = Rational::ONE;
    let mut potential_one_on_set = true;
    for w in set.words() {
        let p = mu.potential(kernel, &EventuallyPeriodic::in_cylinder(w), shift)?;
        potential_one_on_set &= p == ExtValue::Finite(one.clone());
    }
    let mut max_potential = ExtValue::zero();
    for (w, _) in mu.leaves() {
        let p = mu.potential(kernel, &EventuallyPeriodic::in_cylinder(&w), shift)?;
        if p > max_potential {
            max_potential = p;
        }
    }
    Ok(RealizerCertificate {
        mass_matches: on_set == result.value && mu.total_mass() == &result.value,
        potential_one_on_set,
        potential_at_most_one: max_potential.le_rational(&one),
        max_potential,
    })
}

/// s-capacity on binary Cantor space with `2^s = ratio`:
/// `C_s(U) = (C_s(U_0) + C_s(U_1)) / (2^s + C_s(U_0) + C_s(U_1))`.
pub fn capacity_s(set: &PrefixFreeSet, ratio: &Rational) -> Result<Rational> {
    if set.alphabet() != Alphabet::BINARY {
        return Err(Error::AlphabetMismatch(set.alphabet().size(), 2));
    }
    if *ratio <= Rational::ONE || *ratio >= int(2) {
        return Err(Error::OutOfRange(format!("ratio {ratio} must lie in (1, 2)")));
    }
    let full = Rational::ONE - ratio / int(2);
    fn go(set: &PrefixFreeSet, ratio: &Rational, full: &Rational) -> Rational {
        if set.is_empty() {
            return Rational::ZERO;
        }
        if set.contains_empty_word() {
            return full.clone();
        }
        let t = go(&set.child_slice(0), ratio, full) + go(&set.child_slice(1), ratio, full);
        let denom = ratio + &t;
        t / denom
    }
    Ok(go(set, ratio, &full))
}

/// Capacity straight from its definition, as the linear program
/// `min Σ x_τ` over cylinder masses at depth `d = max |σ|` (uniform below depth `d`),
/// subject to `P_f μ ≥ 1` on every depth-`d` cylinder inside `[S]`.
pub fn capacity_lp_oracle(kernel: &Kernel, set: &PrefixFreeSet) -> Result<Rational> {
    capacity_lp_oracle_with_limit(kernel, set, DEFAULT_ORACLE_MAX_DEPTH)
}

pub fn capacity_lp_oracle_with_limit(kernel: &Kernel, set: &PrefixFreeSet, max_depth: usize) -> Result<Rational> {
    check_inputs(kernel, set)?;
    let depth = set.max_len();
    let b = set.alphabet().size();
    let too_large = || {
        Error::TooLarge(format!(
            "depth {depth} over alphabet {b} exceeds depth {max_depth} / {ORACLE_MAX_VARIABLES} variables"
        ))
    };
    if depth > max_depth {
        return Err(too_large());
    }
    let cylinders = b.checked_pow(depth as u32).filter(|&n| n <= ORACLE_MAX_VARIABLES).ok_or_else(too_large)?;
    let cells = set.alphabet().words_of_length(depth);
    debug_assert_eq!(cells.len(), cylinders);
    let covered: Vec<usize> = (0..cells.len()).filter(|&j| set.covers(&cells[j])).collect();
    if covered.is_empty() {
        return Ok(Rational::ZERO);
    }

    // Prefix sums F(n) = f(0) + ... + f(n-1).
    let mut prefix = vec![Rational::ZERO];
    for n in 0..depth {
        let next = &prefix[n] + kernel.eval(n);
        prefix.push(next);
    }
    let tail = kernel.tail_weight(depth);
    // Coefficient of x_i in the potential on cell j.
    let coefficient = |i: usize, j: usize| -> Rational {
        if i == j {
            return &prefix[depth] + &tail;
        }
        let agree = cells[i]
            .symbols()
            .iter()
            .zip(cells[j].symbols())
            .take_while(|(a, c)| a == c)
            .count();
        prefix[agree + 1].clone()
    };

    // Solve the dual: max Σ y_j, Σ_j coef(i, j) y_j ≤ 1 for every cell i, y ≥ 0.
    let a: Vec<Vec<Rational>> = (0..cells.len())
        .map(|i| covered.iter().map(|&j| coefficient(i, j)).collect())
        .collect();
    let rhs = vec![Rational::ONE; cells.len()];
    let c = vec![Rational::ONE; covered.len()];
    let solution = match lp::maximize(&a, &rhs, &c) {
        LpOutcome::Optimal(s) => s,
        LpOutcome::Unbounded => unreachable!("dual objective is bounded by a feasible primal"),
    };

    // The simplex prices are a primal measure; check it is feasible with the same mass.
    let x = &solution.dual;
    let mass: Rational = x.iter().total();
    assert_eq!(mass, solution.value, "dual prices must attain the optimum");
    for &j in &covered {
        let potential: Rational = (0..cells.len()).map(|i| coefficient(i, j) * &x[i]).total();
        assert!(potential >= Rational::ONE, "dual prices must be primal feasible");
    }
    Ok(solution.value)
}

/// One level of a Cf-test check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub level: usize,
    pub capacity: Rational,
    pub bound: Rational,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfTestReport {
    pub levels: Vec<LevelReport>,
}

impl CfTestReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(|l| l.passed)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.levels.iter().find(|l| !l.passed).map(|l| l.level)
    }
}

/// Checks `C_f(U_n) ≤ b0^{-n}` with `b0 = 2` for each level `U_n`.
pub fn cf_test_check(kernel: &Kernel, levels: &[PrefixFreeSet]) -> Result<CfTestReport> {
    let half = ratio(1, 2);
    let levels = levels
        .iter()
        .enumerate()
        .map(|(n, set)| {
            let capacity = capacity(kernel, set, 0)?;
            let bound = pow(&half, n);
            Ok(LevelReport {
                level: n,
                passed: capacity <= bound,
                capacity,
                bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CfTestReport { levels })
}

/// `S` with every word shorter than `depth` replaced by all its extensions of length `depth`.
pub fn refine_to_depth(set: &PrefixFreeSet, depth: usize) -> Result<PrefixFreeSet> {
    let alphabet = set.alphabet();
    let mut words = Vec::new();
    for w in set.words() {
        if w.len() >= depth {
            words.push(w.clone());
            continue;
        }
        for tail in alphabet.words_of_length(depth - w.len()) {
            let mut s = w.symbols().to_vec();
            s.extend_from_slice(tail.symbols());
            words.push(Word::new(s, alphabet)?);
        }
    }
    PrefixFreeSet::new(alphabet, words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn b2() -> Alphabet {
        Alphabet::BINARY
    }

    fn geo32() -> Kernel {
        Kernel::geometric(ratio(3, 2), b2()).unwrap()
    }

    fn set(words: &[&str]) -> PrefixFreeSet {
        PrefixFreeSet::parse_words(b2(), words.iter().copied()).unwrap()
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(capacity(&geo32(), &set(&[]), 0).unwrap(), int(0));
        assert_eq!(capacity(&geo32(), &set(&["-"]), 0).unwrap(), ratio(1, 4));
        assert_eq!(capacity(&geo32(), &set(&["0"]), 0).unwrap(), ratio(1, 7));
        assert_eq!(capacity(&geo32(), &set(&["0", "1"]), 0).unwrap(), ratio(1, 4));
    }

    #[test]
    fn finite_support_is_rejected() {
        let t = Kernel::table(vec![int(1)], b2()).unwrap();
        assert_eq!(capacity(&t, &set(&["0"]), 0), Err(Error::FiniteSupport));
        assert!(realizing_measure(&t, &set(&["0"]), 0).is_err());
        assert!(capacity_lp_oracle(&t, &set(&["0"])).is_err());
    }

    #[test]
    fn realizer_examples() {
        let r = realizing_measure(&geo32(), &set(&["0"]), 0).unwrap();
        assert_eq!(r.value, ratio(1, 7));
        let mu = &r.realizer;
        assert_eq!(mu.cylinder_mass(&Word::empty()), ratio(1, 7));
        assert_eq!(mu.cylinder_mass(&Word::parse("0", b2()).unwrap()), ratio(1, 7));
        assert_eq!(mu.cylinder_mass(&Word::parse("1", b2()).unwrap()), int(0));
        assert_eq!(mu.cylinder_mass(&Word::parse("01", b2()).unwrap()), ratio(1, 14));
        let zero_path = EventuallyPeriodic::parse(":0", b2()).unwrap();
        assert_eq!(mu.potential(&geo32(), &zero_path, 0).unwrap(), ExtValue::Finite(int(1)));
        assert!(certify_realizer(&geo32(), &set(&["0"]), 0, &r).unwrap().holds());

        let full = realizing_measure(&geo32(), &set(&["-"]), 0).unwrap();
        assert_eq!(full.realizer, TrieMeasure::uniform(ratio(1, 4), b2()).unwrap());
        let empty = realizing_measure(&geo32(), &set(&[]), 0).unwrap();
        assert_eq!(empty.value, int(0));
        assert_eq!(empty.realizer, TrieMeasure::zero(b2()));
    }

    #[test]
    fn capacity_s_examples() {
        let r = ratio(3, 2);
        assert_eq!(capacity_s(&set(&["-"]), &r).unwrap(), ratio(1, 4));
        assert_eq!(capacity_s(&set(&["0"]), &r).unwrap(), ratio(1, 7));
        assert_eq!(capacity_s(&set(&["0", "1"]), &r).unwrap(), ratio(1, 4));
        let ternary = PrefixFreeSet::full(Alphabet::new(3).unwrap());
        assert!(capacity_s(&ternary, &r).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(capacity_lp_oracle(&geo32(), &set(&["0"])).unwrap(), ratio(1, 7));
        assert_eq!(capacity_lp_oracle(&geo32(), &set(&["00", "01"])).unwrap(), ratio(1, 7));
        assert_eq!(capacity_lp_oracle(&Kernel::polynomial(1, b2()), &set(&["-"])).unwrap(), ratio(1, 2));
        assert_eq!(capacity_lp_oracle(&geo32(), &set(&[])).unwrap(), int(0));
        let deep = set(&["0000000"]);
        assert!(matches!(capacity_lp_oracle(&geo32(), &deep), Err(Error::TooLarge(_))));
        let b5 = Alphabet::new(5).unwrap();
        let wide = PrefixFreeSet::parse_words(b5, ["000"]).unwrap();
        let k5 = Kernel::geometric(int(2), b5).unwrap();
        assert!(matches!(capacity_lp_oracle(&k5, &wide), Err(Error::TooLarge(_))));
    }

    #[test]
    fn cf_test_examples() {
        let full = set(&["-"]);
        let one = cf_test_check(&geo32(), std::slice::from_ref(&full)).unwrap();
        assert!(one.passed());
        let two = cf_test_check(&geo32(), &[full.clone(), full.clone()]).unwrap();
        assert!(two.passed());
        let four = cf_test_check(&geo32(), &vec![full; 4]).unwrap();
        assert!(!four.passed());
        assert_eq!(four.first_failure(), Some(3));
        assert_eq!(four.levels[3].capacity, ratio(1, 4));
        assert_eq!(four.levels[3].bound, ratio(1, 8));
    }

    #[test]
    fn refinement_keeps_the_realizer() {
        let s = set(&["0", "10"]);
        let fine = refine_to_depth(&s, 3).unwrap();
        assert_eq!(fine.len(), 6);
        let coarse = realizing_measure(&geo32(), &s, 0).unwrap();
        let refined = realizing_measure(&geo32(), &fine, 0).unwrap();
        assert_eq!(coarse.value, refined.value);
        for w in b2().words_of_length(4) {
            assert_eq!(coarse.realizer.cylinder_mass(&w), refined.realizer.cylinder_mass(&w));
        }
    }
}
