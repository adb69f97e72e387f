//! Gauge functions `f: ω → [0, ∞)` and their shifts `f_k(n) = f(n + k)`.
//!
//! Only families whose tail weights `|f_k| = Σ_n f(n + k) b^{-n}` have exact rational closed
//! forms are representable: geometric `f(n) = r^n`, polynomial `f(n) = n^j`, finite tables,
//! and shifts of these.

use dashu::integer::IBig;
use crate::rational::StrictSign;

use crate::error::{Error, Result};
use crate::rational::{int, pow, ratio, ExtValue, Rational, RationalSum};
use crate::word::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelKind {
    /// `f(n) = ratio^n` with `0 < ratio < b`.
    Geometric { ratio: Rational },
    /// `f(n) = n^degree`, with `0^0 = 1`.
    Polynomial { degree: u32 },
    /// `f(n) = values[n]`, zero past the end.
    Table { values: Vec<Rational> },
    /// `f_k(n) = base(n + offset)`.
    Shift { base: Box<Kernel>, offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    kind: KernelKind,
    alphabet: Alphabet,
}

impl Kernel {
    pub fn geometric(ratio: Rational, alphabet: Alphabet) -> Result<Self> {
        if !ratio.is_positive() || ratio >= int(alphabet.size() as i64) {
            return Err(Error::InvalidKernel(format!(
                "geometric ratio {ratio} must lie in (0, {})",
                alphabet.size()
            )));
        }
        Ok(Kernel {
            kind: KernelKind::Geometric { ratio },
            alphabet,
        })
    }

    pub fn polynomial(degree: u32, alphabet: Alphabet) -> Self {
        Kernel {
            kind: KernelKind::Polynomial { degree },
            alphabet,
        }
    }

    pub fn table(values: Vec<Rational>, alphabet: Alphabet) -> Result<Self> {
        if values.iter().any(StrictSign::is_negative) {
            return Err(Error::InvalidKernel("table values must be nonnegative".into()));
        }
        Ok(Kernel {
            kind: KernelKind::Table { values },
            alphabet,
        })
    }

    pub fn shift(base: Kernel, offset: usize) -> Self {
        let alphabet = base.alphabet;
        Kernel {
            kind: KernelKind::Shift {
                base: Box::new(base),
                offset,
            },
            alphabet,
        }
    }

    /// The kernel `f(n) = r^n` behind s-energy with `2^s = r`; requires `1 < r < b`.
    pub fn from_s_energy(ratio: Rational, alphabet: Alphabet) -> Result<Self> {
        if ratio <= Rational::ONE {
            return Err(Error::InvalidKernel(format!(
                "s-energy ratio {ratio} must exceed 1; use the log-energy kernel for s = 0"
            )));
        }
        if ratio >= int(alphabet.size() as i64) {
            return Err(Error::InvalidKernel(format!(
                "no s-energy randoms for ratio {ratio} >= alphabet size {}",
                alphabet.size()
            )));
        }
        Kernel::geometric(ratio, alphabet)
    }

    /// The kernel `f(n) = n^(k-1)` behind log^k-energy; `k = 1` gives `f ≡ 1`.
    pub fn from_log_energy(k: u32, alphabet: Alphabet) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidKernel("log-energy exponent must be at least 1".into()));
        }
        Ok(Kernel::polynomial(k - 1, alphabet))
    }

    pub fn kind(&self) -> &KernelKind {
        &self.kind
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// `f(n)`.
    pub fn eval(&self, n: usize) -> Rational {
        match &self.kind {
            KernelKind::Geometric { ratio } => pow(ratio, n),
            KernelKind::Polynomial { degree } => {
                Rational::from(IBig::from(n).pow(*degree as usize))
            }
            KernelKind::Table { values } => values.get(n).cloned().unwrap_or(Rational::ZERO),
            KernelKind::Shift { base, offset } => base.eval(n + offset),
        }
    }

    pub fn has_finite_support(&self) -> bool {
        match &self.kind {
            KernelKind::Geometric { .. } | KernelKind::Polynomial { .. } => false,
            KernelKind::Table { .. } => true,
            KernelKind::Shift { base, .. } => base.has_finite_support(),
        }
    }

    /// `|f_k| = Σ_n f(n + k) b^{-n}`, exactly.
    pub fn tail_weight(&self, k: usize) -> Rational {
        let b = int(self.alphabet.size() as i64);
        match &self.kind {
            KernelKind::Geometric { ratio } => {
                let one = Rational::ONE;
                pow(ratio, k) / (one - ratio / &b)
            }
            KernelKind::Polynomial { degree } => polynomial_tail_weight(*degree, k, &b),
            KernelKind::Table { values } => {
                let inv_b = Rational::ONE / &b;
                values
                    .iter()
                    .skip(k)
                    .enumerate()
                    .map(|(n, v)| v * pow(&inv_b, n))
                    .total()
            }
            KernelKind::Shift { base, offset } => base.tail_weight(k + offset),
        }
    }

    /// `|f|`.
    pub fn norm(&self) -> Rational {
        self.tail_weight(0)
    }

    /// `Σ_{n ≥ from} f(n)`: infinite for infinite-support kernels.
    pub fn plain_tail_sum(&self, from: usize) -> ExtValue {
        match &self.kind {
            KernelKind::Geometric { .. } | KernelKind::Polynomial { .. } => ExtValue::Infinite,
            KernelKind::Table { values } => ExtValue::Finite(values.iter().skip(from).total()),
            KernelKind::Shift { base, offset } => base.plain_tail_sum(from + offset),
        }
    }

    /// `Σ_{from ≤ n ≤ to} f(n)`.
    pub fn range_sum(&self, from: usize, to: usize) -> Rational {
        (from..=to).map(|n| self.eval(n)).total()
    }

    /// Geometric and polynomial kernels (and their shifts) are amicable; finite tables are
    /// excluded from capacity theory.
    pub fn is_amicable(&self) -> bool {
        !self.has_finite_support()
    }

    /// A certified upper bound on `‖f‖ = sup_k f(k) / |f_{k+1}|`.
    ///
    /// Geometric kernels return the exact value `1 / (r |f|)`. Polynomial kernels return
    /// `(b - 1) / b`, valid because `|f_{k+1}| ≥ (k+1)^j · b/(b-1)`. A shift's supremum ranges
    /// over a subset of its base's, so the base's bound carries over.
    pub fn norm_bound(&self) -> Result<Rational> {
        if !self.is_amicable() {
            return Err(Error::NotAmicable);
        }
        match &self.kind {
            KernelKind::Geometric { ratio } => Ok(Rational::ONE / (ratio * self.norm())),
            KernelKind::Polynomial { .. } => {
                let b = self.alphabet.size() as i64;
                Ok(ratio(b - 1, b))
            }
            KernelKind::Shift { base, .. } => base.norm_bound(),
            KernelKind::Table { .. } => Err(Error::NotAmicable),
        }
    }

    /// The approximation constant `2 · norm_bound + 2` of the dynamic weight.
    pub fn approximation_constant(&self) -> Result<Rational> {
        Ok(self.norm_bound()? * int(2) + int(2))
    }

    pub(crate) fn require_infinite_support(&self) -> Result<()> {
        if self.has_finite_support() {
            Err(Error::FiniteSupport)
        } else {
            Ok(())
        }
    }
}

/// `Σ_n (n + k)^j b^{-n}` by binomial expansion over `A_i = Σ_n n^i x^n` at `x = 1/b`.
fn polynomial_tail_weight(degree: u32, k: usize, b: &Rational) -> Rational {
    let x = Rational::ONE / b;
    let moments = power_moments(degree as usize, &x);
    let k = int(k as i64);
    let j = degree as usize;
    (0..=j)
        .map(|i| Rational::from(binomial(j, i)) * pow(&k, j - i) * &moments[i])
        .total()
}

/// `[A_0, ..., A_j]` where `A_i = (x d/dx)^i 1/(1-x)`, evaluated at `x`.
///
/// Each `A_i` is kept as `P_i(x) / (1-x)^{i+1}` with `P_i` a polynomial over the rationals;
/// `x d/dx [P/(1-x)^m] = [x P' (1-x) + m x P] / (1-x)^{m+1}`.
fn power_moments(j: usize, x: &Rational) -> Vec<Rational> {
    let mut poly: Vec<Rational> = vec![Rational::ONE];
    let one_minus_x = Rational::ONE - x;
    let mut out = Vec::with_capacity(j + 1);
    for i in 0..=j {
        let m = i + 1;
        let p_at_x = poly.iter().rev().fold(Rational::ZERO, |acc, c| acc * x + c);
        out.push(p_at_x / pow(&one_minus_x, m));
        if i == j {
            break;
        }
        // x P'(1-x) + m x P
        let mut next = vec![Rational::ZERO; poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            let deriv = c * int(d as i64);
            next[d] += &deriv;
            next[d + 1] -= &deriv;
            next[d + 1] += c * int(m as i64);
        }
        while next.len() > 1 && next.last().is_some_and(Rational::is_zero) {
            next.pop();
        }
        poly = next;
    }
    out
}

fn binomial(n: usize, k: usize) -> IBig {
    (0..k).fold(IBig::ONE, |acc, i| acc * IBig::from(n - i) / IBig::from(i + 1))
}
