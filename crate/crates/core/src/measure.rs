//! Finite measures on Cantor space stored as finite tries of cylinder masses.
//!
//! Each leaf carries a tail rule: either the mass spreads uniformly below the leaf, or the
//! whole leaf mass is an atom at `leaf · x` for an eventually periodic `x`. Potentials and
//! energies below a leaf are summed in closed form through the kernel's tail weights.

use crate::rational::StrictSign;
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::rational::{int, pow, to_f64, ExtValue, Rational, RationalSum};
use crate::word::{Alphabet, EventuallyPeriodic, Word};

/// Atoms closer than this many levels are not separated by [`TrieMeasure::add`].
pub const ATOM_SEPARATION_CUTOFF: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Uniform,
    Point(EventuallyPeriodic),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Leaf { mass: Rational, tail: Tail },
    Branch { mass: Rational, children: Vec<Node> },
}

impl Node {
    pub fn zero() -> Node {
        Node::uniform(Rational::ZERO)
    }

    pub fn uniform(mass: Rational) -> Node {
        Node::Leaf {
            mass,
            tail: Tail::Uniform,
        }
    }

    pub fn point(mass: Rational, at: EventuallyPeriodic) -> Node {
        if mass.is_zero() {
            return Node::zero();
        }
        Node::Leaf {
            mass,
            tail: Tail::Point(at),
        }
    }

    /// A branch whose mass is the sum of its children.
    pub fn branch(children: Vec<Node>) -> Node {
        let mass = children.iter().map(|c| c.mass().clone()).total();
        Node::Branch { mass, children }
    }

    pub fn mass(&self) -> &Rational {
        match self {
            Node::Leaf { mass, .. } | Node::Branch { mass, .. } => mass,
        }
    }

    /// The children of this node, materializing one level of a leaf's tail.
    fn expand(&self, b: usize) -> Vec<Node> {
        match self {
            Node::Branch { children, .. } => children.clone(),
            Node::Leaf { mass, tail: Tail::Uniform } => {
                let share = mass / int(b as i64);
                vec![Node::uniform(share); b]
            }
            Node::Leaf { mass, tail: Tail::Point(x) } => {
                let first = x.symbol_at(0) as usize;
                (0..b)
                    .map(|i| if i == first { Node::point(mass.clone(), x.drop(1)) } else { Node::zero() })
                    .collect()
            }
        }
    }

    fn child(&self, b: usize, symbol: u8) -> Node {
        match self {
            Node::Branch { children, .. } => children[symbol as usize].clone(),
            _ => self.expand(b).swap_remove(symbol as usize),
        }
    }

    fn scaled(&self, c: &Rational) -> Node {
        match self {
            Node::Leaf { mass, tail } => Node::Leaf {
                mass: mass * c,
                tail: tail.clone(),
            },
            Node::Branch { mass, children } => Node::Branch {
                mass: mass * c,
                children: children.iter().map(|n| n.scaled(c)).collect(),
            },
        }
    }

    fn validate(&self, b: usize, path: &mut Vec<u8>) -> Result<()> {
        let here = || Word::new(path.clone(), Alphabet::new(b).unwrap()).unwrap().to_text();
        if self.mass().is_negative() {
            return Err(Error::InvalidMeasure(format!("negative mass at {}", here())));
        }
        match self {
            Node::Leaf { tail: Tail::Point(x), .. } => {
                x.check_alphabet(Alphabet::new(b)?)?;
            }
            Node::Leaf { .. } => {}
            Node::Branch { mass, children } => {
                if children.len() != b {
                    return Err(Error::InvalidMeasure(format!(
                        "node {} has {} children, expected {b}",
                        here(),
                        children.len()
                    )));
                }
                let sum: Rational = children.iter().map(|c| c.mass().clone()).total();
                if &sum != mass {
                    return Err(Error::InvalidMeasure(format!(
                        "node {} has mass {mass} but its children sum to {sum}",
                        here()
                    )));
                }
                for (i, c) in children.iter().enumerate() {
                    path.push(i as u8);
                    c.validate(b, path)?;
                    path.pop();
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrieMeasure {
    alphabet: Alphabet,
    root: Node,
}

impl TrieMeasure {
    /// Wraps a trie after checking arity, nonnegativity and additivity at every branch.
    pub fn from_root(alphabet: Alphabet, root: Node) -> Result<Self> {
        root.validate(alphabet.size(), &mut Vec::new())?;
        Ok(TrieMeasure { alphabet, root })
    }

    pub fn zero(alphabet: Alphabet) -> Self {
        TrieMeasure {
            alphabet,
            root: Node::zero(),
        }
    }

    /// `uniform(t)[σ] = t · b^{-|σ|}`.
    pub fn uniform(total: Rational, alphabet: Alphabet) -> Result<Self> {
        if total.is_negative() {
            return Err(Error::InvalidMeasure("negative total mass".into()));
        }
        Ok(TrieMeasure {
            alphabet,
            root: Node::uniform(total),
        })
    }

    /// Mass `v` spread uniformly over `[σ]`, nothing elsewhere.
    pub fn uniform_on(word: &Word, mass: Rational, alphabet: Alphabet) -> Result<Self> {
        let word = Word::new(word.symbols().to_vec(), alphabet)?;
        if mass.is_negative() {
            return Err(Error::InvalidMeasure("negative mass".into()));
        }
        let mut node = Node::uniform(mass);
        for &s in word.symbols().iter().rev() {
            let children = (0..alphabet.size())
                .map(|i| if i == s as usize { node.clone() } else { Node::zero() })
                .collect();
            node = Node::branch(children);
        }
        Ok(TrieMeasure { alphabet, root: node })
    }

    /// Uniform mass on each of a set of pairwise disjoint cylinders.
    pub fn uniform_on_cylinders(cylinders: &[(Word, Rational)], alphabet: Alphabet) -> Result<Self> {
        fn go(b: usize, items: &[(&[u8], &Rational)]) -> Result<Node> {
            match items {
                [] => Ok(Node::zero()),
                [(rest, mass)] if rest.is_empty() => Ok(Node::uniform((*mass).clone())),
                _ => {
                    if items.iter().any(|(rest, _)| rest.is_empty()) {
                        return Err(Error::InvalidMeasure("overlapping cylinders".into()));
                    }
                    let children = (0..b)
                        .map(|i| {
                            let below: Vec<(&[u8], &Rational)> = items
                                .iter()
                                .filter(|(rest, _)| rest[0] as usize == i)
                                .map(|(rest, m)| (&rest[1..], *m))
                                .collect();
                            go(b, &below)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Node::branch(children))
                }
            }
        }
        let mut items = Vec::with_capacity(cylinders.len());
        for (word, mass) in cylinders {
            Word::new(word.symbols().to_vec(), alphabet)?;
            if mass.is_negative() {
                return Err(Error::InvalidMeasure("negative mass".into()));
            }
            items.push((word.symbols(), mass));
        }
        Ok(TrieMeasure {
            alphabet,
            root: go(alphabet.size(), &items)?,
        })
    }

    /// An atom of the given mass at `x`.
    pub fn point_mass(mass: Rational, at: EventuallyPeriodic, alphabet: Alphabet) -> Result<Self> {
        at.check_alphabet(alphabet)?;
        if mass.is_negative() {
            return Err(Error::InvalidMeasure("negative mass".into()));
        }
        Ok(TrieMeasure {
            alphabet,
            root: Node::point(mass, at),
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// `μ(A^ω) = μ[λ]`.
    pub fn total_mass(&self) -> &Rational {
        self.root.mass()
    }

    /// Depth of the deepest materialized node.
    pub fn depth(&self) -> usize {
        fn go(n: &Node) -> usize {
            match n {
                Node::Leaf { .. } => 0,
                Node::Branch { children, .. } => 1 + children.iter().map(go).max().unwrap_or(0),
            }
        }
        go(&self.root)
    }

    pub fn has_atoms(&self) -> bool {
        self.leaves()
            .iter()
            .any(|(_, n)| matches!(n, Node::Leaf { tail: Tail::Point(_), mass } if mass.is_positive()))
    }

    /// All leaves with their words, in lexicographic order.
    pub fn leaves(&self) -> Vec<(Word, &Node)> {
        fn go<'a>(n: &'a Node, w: Word, out: &mut Vec<(Word, &'a Node)>) {
            match n {
                Node::Leaf { .. } => out.push((w, n)),
                Node::Branch { children, .. } => {
                    for (i, c) in children.iter().enumerate() {
                        go(c, w.child(i as u8), out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(&self.root, Word::empty(), &mut out);
        out
    }

    /// The potential on each uniform leaf cylinder, where it is constant, from one pass over
    /// the trie. Leaves carrying atoms are skipped.
    pub fn uniform_leaf_potentials(&self, kernel: &Kernel, shift: usize) -> Result<Vec<(Word, Rational)>> {
        kernel.alphabet().ensure_same(self.alphabet)?;
        let depth = self.depth();
        let f: Vec<Rational> = (0..depth).map(|d| kernel.eval(d + shift)).collect();
        let tails: Vec<Rational> = (0..=depth).map(|d| kernel.tail_weight(d + shift)).collect();
        fn go(n: &Node, w: Word, acc: &Rational, f: &[Rational], tails: &[Rational], out: &mut Vec<(Word, Rational)>) {
            let d = w.len();
            match n {
                Node::Leaf { mass, tail: Tail::Uniform } => out.push((w, acc + &tails[d] * mass)),
                Node::Leaf { .. } => {}
                Node::Branch { mass, children } => {
                    let acc = acc + &f[d] * mass;
                    for (i, c) in children.iter().enumerate() {
                        go(c, w.child(i as u8), &acc, f, tails, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(&self.root, Word::empty(), &Rational::ZERO, &f, &tails, &mut out);
        Ok(out)
    }

    /// Whether every materialized branch's mass equals the sum of its children's.
    pub fn is_additive(&self) -> bool {
        self.root.validate(self.alphabet.size(), &mut Vec::new()).is_ok()
    }

    /// `μ[σ]`.
    pub fn cylinder_mass(&self, sigma: &Word) -> Rational {
        let b = self.alphabet.size();
        let mut node = &self.root;
        for (d, &s) in sigma.symbols().iter().enumerate() {
            match node {
                Node::Branch { children, .. } => node = &children[s as usize],
                Node::Leaf { mass, tail: Tail::Uniform } => {
                    let levels = sigma.len() - d;
                    return mass / pow(&int(b as i64), levels);
                }
                Node::Leaf { mass, tail: Tail::Point(x) } => {
                    let rest = Word::new(sigma.symbols()[d..].to_vec(), self.alphabet).unwrap();
                    return if x.starts_with(&rest) { mass.clone() } else { Rational::ZERO };
                }
            }
        }
        node.mass().clone()
    }

    /// `P_{f_k} μ(x) = Σ_n f(n + k) μ[x↾n]`.
    pub fn potential(&self, kernel: &Kernel, x: &EventuallyPeriodic, shift: usize) -> Result<ExtValue> {
        kernel.alphabet().ensure_same(self.alphabet)?;
        x.check_alphabet(self.alphabet)?;
        let mut acc = Rational::ZERO;
        let mut node = &self.root;
        let mut depth = 0;
        loop {
            match node {
                Node::Branch { mass, children } => {
                    acc += kernel.eval(depth + shift) * mass;
                    node = &children[x.symbol_at(depth) as usize];
                    depth += 1;
                }
                Node::Leaf { mass, tail: Tail::Uniform } => {
                    acc += kernel.tail_weight(depth + shift) * mass;
                    return Ok(ExtValue::Finite(acc));
                }
                Node::Leaf { mass, tail: Tail::Point(atom) } => {
                    if mass.is_zero() {
                        return Ok(ExtValue::Finite(acc));
                    }
                    return Ok(match x.drop(depth).common_prefix_len(atom) {
                        Some(agree) => {
                            ExtValue::Finite(acc + kernel.range_sum(depth + shift, depth + agree + shift) * mass)
                        }
                        None => kernel.plain_tail_sum(depth + shift).scale(mass) + &acc,
                    });
                }
            }
        }
    }

    /// `E_f(μ) = Σ_σ f(|σ|) μ[σ]²`, summed node by node.
    pub fn energy(&self, kernel: &Kernel) -> Result<ExtValue> {
        kernel.alphabet().ensure_same(self.alphabet)?;
        fn go(kernel: &Kernel, n: &Node, depth: usize) -> ExtValue {
            match n {
                Node::Branch { mass, children } => children
                    .iter()
                    .fold(ExtValue::Finite(kernel.eval(depth) * mass * mass), |acc, c| {
                        acc + go(kernel, c, depth + 1)
                    }),
                Node::Leaf { mass, tail: Tail::Uniform } => ExtValue::Finite(kernel.tail_weight(depth) * mass * mass),
                Node::Leaf { mass, tail: Tail::Point(_) } => kernel.plain_tail_sum(depth).scale(&(mass * mass)),
            }
        }
        Ok(go(kernel, &self.root, 0))
    }

    /// `∫ P_f ν dμ = Σ_σ f(|σ|) μ[σ] ν[σ]`, walking the union of both tries.
    pub fn mutual_energy(&self, kernel: &Kernel, other: &TrieMeasure) -> Result<ExtValue> {
        kernel.alphabet().ensure_same(self.alphabet)?;
        self.alphabet.ensure_same(other.alphabet)?;
        let b = self.alphabet.size();
        fn go(kernel: &Kernel, b: usize, p: &Node, q: &Node, depth: usize) -> ExtValue {
            let (mp, mq) = (p.mass(), q.mass());
            if mp.is_zero() || mq.is_zero() {
                return ExtValue::zero();
            }
            let both = mp * mq;
            match (p, q) {
                (Node::Leaf { tail: Tail::Point(x), .. }, Node::Leaf { tail: Tail::Point(y), .. }) => {
                    match x.common_prefix_len(y) {
                        Some(agree) => ExtValue::Finite(kernel.range_sum(depth, depth + agree) * both),
                        None => kernel.plain_tail_sum(depth).scale(&both),
                    }
                }
                (Node::Leaf { .. }, Node::Leaf { .. }) => {
                    // At least one side is uniform: level n carries the product on a single
                    // cylinder, or spread evenly, and either way sums to m·m'·b^{-(n-d)}.
                    ExtValue::Finite(kernel.tail_weight(depth) * both)
                }
                _ => {
                    let (cp, cq) = (p.expand(b), q.expand(b));
                    cp.iter()
                        .zip(&cq)
                        .fold(ExtValue::Finite(kernel.eval(depth) * both), |acc, (x, y)| {
                            acc + go(kernel, b, x, y, depth + 1)
                        })
                }
            }
        }
        Ok(go(kernel, b, &self.root, &other.root, 0))
    }

    /// Riesz energy `∬ ρ(X,Y)^{-s} dμ dμ` with `2^s = ratio`, via
    /// `(1/r) μ[λ]² + (1 - 1/r) E_s(μ)`.
    pub fn riesz_energy(&self, ratio: &Rational) -> Result<ExtValue> {
        let kernel = Kernel::from_s_energy(ratio.clone(), self.alphabet)?;
        let inv = Rational::ONE / ratio;
        let m = self.total_mass();
        Ok(self.energy(&kernel)?.scale(&(Rational::ONE - &inv)) + &(inv * m * m))
    }

    /// Riesz potential `∫ ρ(x,Y)^{-s} dμ(Y)`, via `(1/r) μ[λ] + (1 - 1/r) P_s μ(x)`.
    pub fn riesz_potential(&self, ratio: &Rational, x: &EventuallyPeriodic) -> Result<ExtValue> {
        let kernel = Kernel::from_s_energy(ratio.clone(), self.alphabet)?;
        let inv = Rational::ONE / ratio;
        Ok(self.potential(&kernel, x, 0)?.scale(&(Rational::ONE - &inv)) + &(inv * self.total_mass()))
    }

    /// `c · μ` for `c > 0`.
    pub fn scale(&self, c: &Rational) -> Result<TrieMeasure> {
        if !c.is_positive() {
            return Err(Error::OutOfRange(format!("scale factor {c} must be positive")));
        }
        Ok(TrieMeasure {
            alphabet: self.alphabet,
            root: self.root.scaled(c),
        })
    }

    /// `μ + ν`. Distinct atoms in one cylinder are separated by refining the trie; a uniform
    /// tail and an atom sharing a cylinder is not representable.
    pub fn add(&self, other: &TrieMeasure) -> Result<TrieMeasure> {
        self.alphabet.ensure_same(other.alphabet)?;
        let b = self.alphabet.size();
        fn go(b: usize, p: &Node, q: &Node, path: &mut Vec<u8>) -> Result<Node> {
            if p.mass().is_zero() {
                return Ok(q.clone());
            }
            if q.mass().is_zero() {
                return Ok(p.clone());
            }
            match (p, q) {
                (Node::Leaf { mass: a, tail: Tail::Uniform }, Node::Leaf { mass: c, tail: Tail::Uniform }) => {
                    Ok(Node::uniform(a + c))
                }
                (Node::Leaf { mass: a, tail: Tail::Point(x) }, Node::Leaf { mass: c, tail: Tail::Point(y) })
                    if x == y =>
                {
                    Ok(Node::point(a + c, x.clone()))
                }
                (Node::Leaf { tail: Tail::Point(_), .. }, Node::Leaf { tail: Tail::Point(_), .. }) => {
                    if path.len() >= ATOM_SEPARATION_CUTOFF {
                        return Err(Error::DepthCutoff(ATOM_SEPARATION_CUTOFF));
                    }
                    merge_children(b, p, q, path)
                }
                (Node::Leaf { .. }, Node::Leaf { .. }) => {
                    let at = path.iter().map(|&s| std::char::from_digit(s as u32, 36).unwrap()).collect();
                    Err(Error::MixedTails(at))
                }
                _ => merge_children(b, p, q, path),
            }
        }
        fn merge_children(b: usize, p: &Node, q: &Node, path: &mut Vec<u8>) -> Result<Node> {
            let mut children = Vec::with_capacity(b);
            for (i, (x, y)) in p.expand(b).iter().zip(&q.expand(b)).enumerate() {
                path.push(i as u8);
                children.push(go(b, x, y, path)?);
                path.pop();
            }
            Ok(Node::branch(children))
        }
        Ok(TrieMeasure {
            alphabet: self.alphabet,
            root: go(b, &self.root, &other.root, &mut Vec::new())?,
        })
    }

    /// The sub-measure `ν[τ] = μ[iτ]` below the child `i`.
    pub fn child_measure(&self, symbol: u8) -> TrieMeasure {
        TrieMeasure {
            alphabet: self.alphabet,
            root: self.root.child(self.alphabet.size(), symbol),
        }
    }

    /// A floating-point mirror of the trie for sampling.
    pub fn sampler(&self) -> Result<PairSampler> {
        if !self.total_mass().is_positive() {
            return Err(Error::OutOfRange("cannot sample from the zero measure".into()));
        }
        Ok(PairSampler {
            b: self.alphabet.size(),
            root: SampleNode::build(&self.root),
        })
    }
}

#[derive(Debug, Clone)]
enum SampleNode {
    Uniform,
    Atom,
    Branch { weights: Vec<f64>, children: Vec<SampleNode> },
}

impl SampleNode {
    fn build(n: &Node) -> SampleNode {
        match n {
            Node::Leaf { tail: Tail::Uniform, .. } => SampleNode::Uniform,
            Node::Leaf { tail: Tail::Point(_), .. } => SampleNode::Atom,
            Node::Branch { mass, children } => {
                let weights = children
                    .iter()
                    .map(|c| if mass.is_zero() { 0.0 } else { to_f64(&(c.mass() / mass)) })
                    .collect();
                SampleNode::Branch {
                    weights,
                    children: children.iter().map(SampleNode::build).collect(),
                }
            }
        }
    }
}

/// Samples `N(X, Y)`, the length of the common prefix of independent `X, Y ~ μ/μ[λ]`.
#[derive(Debug, Clone)]
pub struct PairSampler {
    b: usize,
    root: SampleNode,
}

impl PairSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        let mut node = &self.root;
        let mut depth = 0;
        loop {
            match node {
                SampleNode::Atom => return None,
                SampleNode::Uniform => {
                    // Below a uniform leaf each further symbol agrees with probability 1/b.
                    let mut n = depth;
                    while rng.gen_range(0..self.b) == 0 {
                        n += 1;
                    }
                    return Some(n);
                }
                SampleNode::Branch { weights, children } => {
                    let x = pick(weights, rng);
                    let y = pick(weights, rng);
                    if x != y {
                        return Some(depth);
                    }
                    node = &children[x];
                    depth += 1;
                }
            }
        }
    }
}

fn pick<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let mut u: f64 = rng.gen();
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

/// Monte Carlo estimate of the Riesz energy, `μ[λ]² · E[r^N]`; returns `(mean, standard error)`.
pub fn monte_carlo_riesz_energy<R: Rng + ?Sized>(
    mu: &TrieMeasure,
    ratio: &Rational,
    samples: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if mu.has_atoms() {
        return Err(Error::OutOfRange("Monte Carlo Riesz energy needs an atomless measure".into()));
    }
    if samples < 2 {
        return Err(Error::OutOfRange("need at least two samples".into()));
    }
    let sampler = mu.sampler()?;
    let r = to_f64(ratio);
    let m = to_f64(mu.total_mass());
    let scale = m * m;
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let n = sampler.sample(rng).expect("atomless");
        let v = scale * r.powi(n as i32);
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean) * n / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
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

    fn w(s: &str) -> Word {
        Word::parse(s, b2()).unwrap()
    }

    fn pt(s: &str) -> EventuallyPeriodic {
        EventuallyPeriodic::parse(s, b2()).unwrap()
    }

    #[test]
    fn cylinder_mass_examples() {
        let u = TrieMeasure::uniform(int(1), b2()).unwrap();
        assert_eq!(u.cylinder_mass(&w("01")), ratio(1, 4));
        let atom = TrieMeasure::point_mass(int(1), pt(":0"), b2()).unwrap();
        assert_eq!(atom.cylinder_mass(&w("1")), int(0));
        assert_eq!(atom.cylinder_mass(&w("000")), int(1));
        let below0 = TrieMeasure::uniform_on(&w("0"), ratio(1, 7), b2()).unwrap();
        assert_eq!(below0.total_mass(), &ratio(1, 7));
        assert_eq!(below0.cylinder_mass(&w("00")), ratio(1, 14));
    }

    #[test]
    fn potential_examples() {
        let quarter = TrieMeasure::uniform(ratio(1, 4), b2()).unwrap();
        let unit = TrieMeasure::uniform(int(1), b2()).unwrap();
        for x in [":0", "1:01", "110:1"] {
            assert_eq!(quarter.potential(&geo32(), &pt(x), 0).unwrap(), ExtValue::Finite(int(1)));
            assert_eq!(unit.potential(&geo32(), &pt(x), 0).unwrap(), ExtValue::Finite(int(4)));
        }
        let atom = TrieMeasure::point_mass(int(1), pt("1:01"), b2()).unwrap();
        assert!(atom.potential(&geo32(), &pt("10:10"), 0).unwrap().is_infinite());
        // x leaves the atom's path after "1": terms n = 0, 1.
        assert_eq!(
            atom.potential(&geo32(), &pt(":1"), 0).unwrap(),
            ExtValue::Finite(int(1) + ratio(3, 2))
        );
        let table = Kernel::table(vec![int(1), int(2), int(3)], b2()).unwrap();
        assert_eq!(atom.potential(&table, &pt("10:10"), 0).unwrap(), ExtValue::Finite(int(6)));
        assert_eq!(atom.potential(&table, &pt("10:10"), 1).unwrap(), ExtValue::Finite(int(5)));
    }

    #[test]
    fn energy_examples() {
        let unit = TrieMeasure::uniform(int(1), b2()).unwrap();
        assert_eq!(unit.energy(&geo32()).unwrap(), ExtValue::Finite(int(4)));
        assert_eq!(TrieMeasure::zero(b2()).energy(&geo32()).unwrap(), ExtValue::zero());
        let atom = TrieMeasure::point_mass(ratio(1, 3), pt(":01"), b2()).unwrap();
        assert!(atom.energy(&geo32()).unwrap().is_infinite());
        assert_eq!(unit.scale(&int(3)).unwrap().energy(&geo32()).unwrap(), ExtValue::Finite(int(36)));
    }

    #[test]
    fn mutual_energy_examples() {
        let unit = TrieMeasure::uniform(int(1), b2()).unwrap();
        let quarter = TrieMeasure::uniform(ratio(1, 4), b2()).unwrap();
        let zero = TrieMeasure::zero(b2());
        assert_eq!(unit.mutual_energy(&geo32(), &unit).unwrap(), ExtValue::Finite(int(4)));
        assert_eq!(unit.mutual_energy(&geo32(), &zero).unwrap(), ExtValue::zero());
        assert_eq!(quarter.mutual_energy(&geo32(), &quarter).unwrap(), ExtValue::Finite(ratio(1, 4)));
        // Uniform against an atom: Σ f(n) 2^{-n} = |f|.
        let atom = TrieMeasure::point_mass(int(1), pt("0:1"), b2()).unwrap();
        assert_eq!(unit.mutual_energy(&geo32(), &atom).unwrap(), ExtValue::Finite(int(4)));
    }

    #[test]
    fn riesz_examples() {
        let unit = TrieMeasure::uniform(int(1), b2()).unwrap();
        let quarter = TrieMeasure::uniform(ratio(1, 4), b2()).unwrap();
        let r = ratio(3, 2);
        assert_eq!(unit.riesz_energy(&r).unwrap(), ExtValue::Finite(int(2)));
        assert_eq!(TrieMeasure::zero(b2()).riesz_energy(&r).unwrap(), ExtValue::zero());
        let atom = TrieMeasure::point_mass(int(1), pt(":0"), b2()).unwrap();
        assert!(atom.riesz_energy(&r).unwrap().is_infinite());
        assert_eq!(unit.riesz_potential(&r, &pt("0:1")).unwrap(), ExtValue::Finite(int(2)));
        assert_eq!(quarter.riesz_potential(&r, &pt(":0")).unwrap(), ExtValue::Finite(ratio(1, 2)));
        assert_eq!(TrieMeasure::zero(b2()).riesz_potential(&r, &pt(":0")).unwrap(), ExtValue::zero());
        assert!(unit.riesz_energy(&int(2)).is_err());
    }

    #[test]
    fn algebra() {
        let unit = TrieMeasure::uniform(int(1), b2()).unwrap();
        assert_eq!(unit.scale(&ratio(1, 4)).unwrap().total_mass(), &ratio(1, 4));
        let half = TrieMeasure::uniform(ratio(1, 2), b2()).unwrap();
        assert_eq!(half.add(&half).unwrap(), unit);
        assert!(unit.scale(&int(0)).is_err());
        let left = TrieMeasure::uniform_on(&w("0"), ratio(1, 2), b2()).unwrap();
        let right = TrieMeasure::uniform_on(&w("1"), ratio(1, 2), b2()).unwrap();
        let sum = left.add(&right).unwrap();
        assert!(sum.is_additive());
        for s in ["-", "0", "1", "01", "110"] {
            assert_eq!(sum.cylinder_mass(&w(s)), unit.cylinder_mass(&w(s)));
        }
    }

    #[test]
    fn adding_distinct_atoms_separates_them() {
        let a = TrieMeasure::point_mass(int(1), pt("01:1"), b2()).unwrap();
        let c = TrieMeasure::point_mass(int(2), pt("0:0"), b2()).unwrap();
        let s = a.add(&c).unwrap();
        assert!(s.is_additive());
        assert_eq!(s.cylinder_mass(&w("0")), int(3));
        assert_eq!(s.cylinder_mass(&w("01")), int(1));
        assert_eq!(s.cylinder_mass(&w("000")), int(2));
        let same = a.add(&TrieMeasure::point_mass(int(1), pt("011:1"), b2()).unwrap()).unwrap();
        assert_eq!(same.cylinder_mass(&w("0111")), int(2));
        let u = TrieMeasure::uniform(int(1), b2()).unwrap();
        assert!(matches!(u.add(&a), Err(Error::MixedTails(_))));
    }

    #[test]
    fn invalid_tries_are_rejected() {
        let bad = Node::Branch {
            mass: int(1),
            children: vec![Node::uniform(ratio(1, 3)), Node::uniform(ratio(1, 3))],
        };
        assert!(TrieMeasure::from_root(b2(), bad).is_err());
        let neg = Node::branch(vec![Node::uniform(int(-1)), Node::uniform(int(2))]);
        assert!(TrieMeasure::from_root(b2(), neg).is_err());
        let arity = Node::branch(vec![Node::uniform(int(1))]);
        assert!(TrieMeasure::from_root(b2(), arity).is_err());
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let b3 = Alphabet::new(3).unwrap();
        let u3 = TrieMeasure::uniform(int(1), b3).unwrap();
        assert!(u3.energy(&geo32()).is_err());
        assert!(u3.add(&TrieMeasure::zero(b2())).is_err());
    }
}
