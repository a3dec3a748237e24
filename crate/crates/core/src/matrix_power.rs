//! Closed-form powers of the 2×2 coefficient matrix `A = [[a, b], [c, d]]`.
//!
//! The four cases are decided in a fixed order: `ad - bc = 0` first, then a
//! vanishing discriminant `(a - d)² + 4bc`, then a vanishing trace.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{rational_sqrt, ExactField, QuadScalar, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SystemParams {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl SystemParams {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |v: i64| Rational::from_integer(v.into());
        Self::new(r(a), r(b), r(c), r(d))
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.d
    }

    /// `(a - d)² + 4bc`.
    pub fn discriminant(&self) -> Rational {
        let diff = &self.a - &self.d;
        &diff * &diff + Rational::from_integer(4.into()) * &self.b * &self.c
    }

    /// `a = b = 0` or `c = d = 0`: one coordinate is forced to zero after a step.
    pub fn is_degenerate(&self) -> bool {
        (self.a.is_zero() && self.b.is_zero()) || (self.c.is_zero() && self.d.is_zero())
    }

    pub fn matrix(&self) -> Mat2<Rational> {
        Mat2::new(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone())
    }

    /// Parameters of the system with the roles of `x` and `y` exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.d.clone(), self.c.clone(), self.b.clone(), self.a.clone())
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, b={}, c={}, d={})", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    /// `ad - bc = 0`
    RankDeficient,
    /// `ad - bc ≠ 0`, `(a - d)² + 4bc = 0`
    Repeated,
    /// `ad - bc ≠ 0`, `(a - d)² + 4bc ≠ 0`, `a + d ≠ 0`
    Distinct,
    /// `ad - bc ≠ 0`, `(a - d)² + 4bc ≠ 0`, `a + d = 0`
    AntiTraceDistinct,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::RankDeficient => "rank-deficient",
            CaseTag::Repeated => "repeated",
            CaseTag::Distinct => "distinct",
            CaseTag::AntiTraceDistinct => "antitrace-distinct",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify(p: &SystemParams) -> CaseTag {
    if p.det().is_zero() {
        CaseTag::RankDeficient
    } else if p.discriminant().is_zero() {
        CaseTag::Repeated
    } else if p.trace().is_zero() {
        CaseTag::AntiTraceDistinct
    } else {
        CaseTag::Distinct
    }
}

pub(crate) fn expect_case(p: &SystemParams, expected: CaseTag) -> Result<()> {
    let found = classify(p);
    if found == expected {
        Ok(())
    } else {
        Err(Error::CaseMismatch { expected, found })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eigenvalues {
    /// The discriminant is a rational square (including 0).
    Rational { lambda1: Rational, lambda2: Rational },
    /// `λ = ((a + d) ± √D) / 2` in `Q(√D)`.
    Quadratic { lambda1: QuadScalar, lambda2: QuadScalar },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenpair {
    pub discriminant: Rational,
    pub values: Eigenvalues,
    /// Set when `ad - bc = 0`; the values are still correct but no formula uses them.
    pub informational: bool,
}

pub fn eigenvalues(p: &SystemParams) -> Eigenpair {
    let disc = p.discriminant();
    let half = Rational::new(1.into(), 2.into());
    let mid = p.trace() * &half;
    let values = match rational_sqrt(&disc) {
        Some(root) => {
            let r = root * &half;
            Eigenvalues::Rational { lambda1: &mid + &r, lambda2: &mid - &r }
        }
        None => {
            let lambda1 = QuadScalar::new(mid.clone(), half.clone(), disc.clone())
                .expect("non-square discriminant");
            let lambda2 = lambda1.conj();
            Eigenvalues::Quadratic { lambda1, lambda2 }
        }
    };
    Eigenpair { discriminant: disc, values, informational: p.det().is_zero() }
}

/// A 2×2 matrix over `Q` or `Q(√D)`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2<T> {
    pub rows: [[T; 2]; 2],
}

impl<T: ExactField> Mat2<T> {
    pub fn new(m00: T, m01: T, m10: T, m11: T) -> Self {
        Self { rows: [[m00, m01], [m10, m11]] }
    }

    pub fn identity_like(like: &T) -> Self {
        let (zero, one) = (like.embed(&Rational::zero()), like.embed(&Rational::one()));
        Self::new(one.clone(), zero.clone(), zero, one)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let e = |i: usize, j: usize| {
            self.rows[i][0].times(&other.rows[0][j]).plus(&self.rows[i][1].times(&other.rows[1][j]))
        };
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn scale(&self, s: &T) -> Self {
        let [[a, b], [c, d]] = &self.rows;
        Self::new(s.times(a), s.times(b), s.times(c), s.times(d))
    }

    pub fn apply(&self, v: &[T; 2]) -> [T; 2] {
        let row = |i: usize| self.rows[i][0].times(&v[0]).plus(&self.rows[i][1].times(&v[1]));
        [row(0), row(1)]
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.rows.iter().flatten()
    }
}

impl Mat2<Rational> {
    pub fn identity() -> Self {
        Self::identity_like(&Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.entries().all(Zero::is_zero)
    }
}

impl<T: fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.rows;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// `A^n` for `ad - bc = 0`: the identity at `n = 0`, else `(a + d)^(n-1) A`
/// with `0^0 = 1`, so a nilpotent `A` gives `A` at `n = 1` and zero after.
pub fn power_rank_deficient(p: &SystemParams, n: u64) -> Result<Mat2<Rational>> {
    expect_case(p, CaseTag::RankDeficient)?;
    if n == 0 {
        return Ok(Mat2::identity());
    }
    Ok(p.matrix().scale(&p.trace().power(n - 1)))
}

/// `A^n` over whichever field holds the eigenvalues, before the irrational
/// parts (which always cancel) are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormalPower {
    Rational(Mat2<Rational>),
    Quadratic(Mat2<QuadScalar>),
}

impl FormalPower {
    /// True when every entry has a zero `√D` component.
    pub fn is_real(&self) -> bool {
        match self {
            FormalPower::Rational(_) => true,
            FormalPower::Quadratic(m) => m.entries().all(|e| e.q().is_zero()),
        }
    }

    pub fn into_rational(self) -> Option<Mat2<Rational>> {
        match self {
            FormalPower::Rational(m) => Some(m),
            FormalPower::Quadratic(m) => {
                let mut it = m.entries().map(ExactField::to_rational);
                Some(Mat2::new(it.next()??, it.next()??, it.next()??, it.next()??))
            }
        }
    }
}

fn putzer_distinct<T: ExactField>(p: &SystemParams, l1: &T, l2: &T, n: u64) -> Result<Mat2<T>> {
    let emb = |r: &Rational| l1.embed(r);
    let (a, b, c, d) = (emb(&p.a), emb(&p.b), emb(&p.c), emb(&p.d));
    let (l1n, l2n) = (l1.power(n), l2.power(n));
    let gap = l1.minus(l2).recip()?;
    let diag = |x: &T| x.minus(l2).times(&l1n).minus(&x.minus(l1).times(&l2n)).times(&gap);
    let off = l1n.minus(&l2n).times(&gap);
    Ok(Mat2::new(diag(&a), b.times(&off), c.times(&off), diag(&d)))
}

/// `A^n` for distinct eigenvalues, in `Q(√D)` when `D` is not a square.
pub fn power_distinct_formal(p: &SystemParams, n: u64) -> Result<FormalPower> {
    let case = classify(p);
    if !matches!(case, CaseTag::Distinct | CaseTag::AntiTraceDistinct) {
        return Err(Error::CaseMismatch { expected: CaseTag::Distinct, found: case });
    }
    Ok(match eigenvalues(p).values {
        Eigenvalues::Rational { lambda1, lambda2 } => {
            FormalPower::Rational(putzer_distinct(p, &lambda1, &lambda2, n)?)
        }
        Eigenvalues::Quadratic { lambda1, lambda2 } => {
            FormalPower::Quadratic(putzer_distinct(p, &lambda1, &lambda2, n)?)
        }
    })
}

/// `A^n` for distinct eigenvalues. The general formula also covers a zero
/// trace, so both distinct cases are accepted.
pub fn power_distinct(p: &SystemParams, n: u64) -> Result<Mat2<Rational>> {
    let formal = power_distinct_formal(p, n)?;
    assert!(formal.is_real(), "irrational part of A^{n} did not cancel for {p}");
    Ok(formal.into_rational().expect("real entries"))
}

/// `A^n` for a repeated eigenvalue `μ = (a + d) / 2`:
/// `μ^(n-1) [[μ + n(a-d)/2, bn], [cn, μ + n(d-a)/2]]`.
pub fn power_repeated(p: &SystemParams, n: u64) -> Result<Mat2<Rational>> {
    expect_case(p, CaseTag::Repeated)?;
    if n == 0 {
        return Ok(Mat2::identity());
    }
    let half = Rational::new(1.into(), 2.into());
    let mu = p.trace() * &half;
    let nr = Rational::from_integer(n.into());
    let skew = (&p.a - &p.d) * &half * &nr;
    let m = Mat2::new(&mu + &skew, &p.b * &nr, &p.c * &nr, &mu - &skew);
    Ok(m.scale(&mu.power(n - 1)))
}

/// `A^n` for zero trace: `A² = (a² + bc) I`, so even powers are scalar and
/// odd powers are scalar multiples of `A`.
pub fn power_antitrace(p: &SystemParams, n: u64) -> Result<Mat2<Rational>> {
    expect_case(p, CaseTag::AntiTraceDistinct)?;
    let s = (&p.a * &p.a + &p.b * &p.c).power(n / 2);
    Ok(if n.is_multiple_of(2) { Mat2::identity().scale(&s) } else { p.matrix().scale(&s) })
}

pub fn power(p: &SystemParams, n: u64) -> Mat2<Rational> {
    let result = match classify(p) {
        CaseTag::RankDeficient => power_rank_deficient(p, n),
        CaseTag::Repeated => power_repeated(p, n),
        CaseTag::Distinct => power_distinct(p, n),
        CaseTag::AntiTraceDistinct => power_antitrace(p, n),
    };
    result.expect("dispatch matches the case")
}
