//! Closed-form orbits of
//!
//! ```text
//! x_{n+1} = a x_n² y_n + b x_n y_n²
//! y_{n+1} = c x_n² y_n + d x_n y_n²
//! ```
//!
//! Every nontrivial orbit satisfies `x_{n+1} = (a r_n + b r_n²) x_n³` with
//! `r_n = y_n / x_n = v_n / u_n`, so `x_n = x_0^(3^n) ∏_{k<n} (a r_k + b r_k²)^(3^(n-k-1))`.
//! The four case solvers differ only in how they produce the ratios `r_k`.
//! All results are [`FactoredValue`]s; `x_n` has `Θ(3^n)` digits.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_arith::{
    antitrace_exponents, geometric_exponent, three_pow, FactoredValue, Rational, DEFAULT_DIGIT_BUDGET,
};
use crate::linearization::{antitrace_ratios, linear_states, ratio_constants, InitialPair, LinearState};
use crate::matrix_power::{classify, CaseTag, SystemParams};
use crate::zero_sets::{z0_member, z1_member, z2_member, z3_member, zero_set_member, MembershipStatus, ZeroSetVerdict, DEFAULT_HORIZON};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTerm {
    pub n: u64,
    pub x: FactoredValue,
    pub y: FactoredValue,
}

impl OrbitTerm {
    pub fn from_rationals(n: u64, x: &Rational, y: &Rational) -> Self {
        Self { n, x: FactoredValue::from_rational(x), y: FactoredValue::from_rational(y) }
    }

    pub fn expand(&self, digit_budget: u64) -> Result<(Rational, Rational)> {
        Ok((self.x.expand(digit_budget)?, self.y.expand(digit_budget)?))
    }

    fn initial(init: &InitialPair) -> Self {
        Self::from_rationals(0, &init.x0, &init.y0)
    }
}

/// A finite coefficient sequence `a_0, ..., a_{m-1}` with no zero entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffSequence(Vec<Rational>);

impl CoeffSequence {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        match coeffs.iter().position(Zero::is_zero) {
            Some(i) => Err(Error::ZeroCoefficient(i)),
            None => Ok(Self(coeffs)),
        }
    }

    pub fn constant(value: Rational, len: usize) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }
}

/// `x_0^(3^n) ∏_{k<n} coeffs[k]^(3^(n-k-1))`. A zero coefficient zeroes the value.
fn cubic_product(x0: &Rational, coeffs: &[Rational]) -> FactoredValue {
    let n = coeffs.len() as u64;
    let factors = std::iter::once((x0.clone(), three_pow(n)))
        .chain(coeffs.iter().enumerate().map(|(k, c)| (c.clone(), three_pow(n - k as u64 - 1))));
    FactoredValue::new(crate::exact_arith::Sign::Positive, factors)
}

/// Solution of `x_{k+1} = a_k x_k³` at index `n`.
pub fn cubic_coeff_solve(seq: &CoeffSequence, x0: &Rational, n: u64) -> Result<FactoredValue> {
    let available = seq.0.len();
    if n > available as u64 {
        return Err(Error::SequenceTooShort { requested: n, available });
    }
    Ok(cubic_product(x0, &seq.0[..n as usize]))
}

fn size_digits(r: &Rational) -> u64 {
    let bits = r.numer().bits().max(r.denom().bits());
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as u64
}

/// Terms `0..=n` by literal application of the recurrence.
pub fn iterate_direct_values(
    p: &SystemParams,
    init: &InitialPair,
    n: u64,
    digit_budget: u64,
) -> Result<Vec<(Rational, Rational)>> {
    let coeff_digits = [&p.a, &p.b, &p.c, &p.d].into_iter().map(size_digits).max().unwrap_or(0);
    let mut out = vec![(init.x0.clone(), init.y0.clone())];
    for _ in 0..n {
        let (x, y) = out.last().expect("nonempty");
        let estimate = 3 * size_digits(x).max(size_digits(y)) + coeff_digits + 1;
        if estimate > digit_budget {
            return Err(Error::DigitBudgetExceeded { estimate, budget: digit_budget });
        }
        let xy = x * y;
        let next = (&xy * (&p.a * x + &p.b * y), &xy * (&p.c * x + &p.d * y));
        out.push(next);
    }
    Ok(out)
}

pub fn iterate_direct(p: &SystemParams, init: &InitialPair, n: u64, digit_budget: u64) -> Result<Vec<OrbitTerm>> {
    let values = iterate_direct_values(p, init, n, digit_budget)?;
    Ok(values.iter().enumerate().map(|(k, (x, y))| OrbitTerm::from_rationals(k as u64, x, y)).collect())
}

fn reject_member(verdict: ZeroSetVerdict) -> Result<()> {
    match verdict.witness {
        Some(index) if verdict.is_member() => Err(Error::TrivialSolutionEncountered { index }),
        _ => Ok(()),
    }
}

fn step_coefficient(p: &SystemParams, r: &Rational) -> Rational {
    &p.a * r + &p.b * r * r
}

/// Builds the term from the ratios `r_0..=r_n`.
fn term_from_ratios(p: &SystemParams, init: &InitialPair, ratios: &[Rational]) -> OrbitTerm {
    let (last, earlier) = ratios.split_last().expect("at least r_0");
    let coeffs: Vec<Rational> = earlier.iter().map(|r| step_coefficient(p, r)).collect();
    let x = cubic_product(&init.x0, &coeffs);
    let y = x.mul(&FactoredValue::from_rational(last));
    OrbitTerm { n: earlier.len() as u64, x, y }
}

/// `ad - bc = 0`, `a + d ≠ 0`: from `n = 1` on, `y_n / x_n` is the constant `t`
/// with `(c, d) = t (a, b)`, so
/// `x_n = (a x0² y0 + b x0 y0²)^(3^(n-1)) K^((3^(n-1) - 1) / 2)` with `K = a t + b t²`.
pub fn solve_rank_deficient(p: &SystemParams, init: &InitialPair, n: u64) -> Result<OrbitTerm> {
    reject_member(z0_member(p, init)?)?;
    if n == 0 {
        return Ok(OrbitTerm::initial(init));
    }
    let t = if !p.a.is_zero() { &p.c / &p.a } else { &p.d / &p.b };
    let k = step_coefficient(p, &t);
    let x1 = &init.x0 * &init.y0 * (&p.a * &init.x0 + &p.b * &init.y0);
    let x = FactoredValue::power_of(&x1, three_pow(n - 1)).mul(&FactoredValue::power_of(&k, geometric_exponent(n - 1)));
    let y = x.mul(&FactoredValue::from_rational(&t));
    Ok(OrbitTerm { n, x, y })
}

/// Distinct eigenvalues with nonzero trace; ratios come from the linear orbit.
pub fn solve_distinct(p: &SystemParams, init: &InitialPair, n: u64) -> Result<OrbitTerm> {
    reject_member(z1_member(p, init, n.max(DEFAULT_HORIZON))?)?;
    let ratios = linear_states(p, init)
        .take(n as usize + 1)
        .map(|s| {
            if s.has_zero() {
                Err(Error::TrivialSolutionEncountered { index: s.n })
            } else {
                Ok(&s.v / &s.u)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(term_from_ratios(p, init, &ratios))
}

/// Repeated eigenvalue: `r_k = (c3 + c4 k) / (c1 + c2 k)`.
pub fn solve_repeated(p: &SystemParams, init: &InitialPair, n: u64) -> Result<OrbitTerm> {
    reject_member(z2_member(p, init)?)?;
    let constants = ratio_constants(p, init)?;
    let ratios = (0..=n).map(|k| constants.ratio_at(p, k)).collect::<Result<Vec<_>>>()?;
    Ok(term_from_ratios(p, init, &ratios))
}

/// Zero trace: the ratio alternates between `s0 = y0/x0` and
/// `s1 = (c x0 + d y0)/(a x0 + b y0)`, so with `R_i = a s_i + b s_i²`
/// `x_{2m} = x0^(9^m) (R1 R0³)^((9^m - 1)/8)` and
/// `x_{2m+1} = x0^(3·9^m) R0 (R1 R0³)^((3·9^m - 3)/8)`.
pub fn solve_antitrace(p: &SystemParams, init: &InitialPair, n: u64) -> Result<OrbitTerm> {
    reject_member(z3_member(p, init)?)?;
    let (s0, s1) = antitrace_ratios(p, init)?;
    let (r0, r1) = (step_coefficient(p, &s0), step_coefficient(p, &s1));
    let cycle = FactoredValue::from_rational(&r1).mul(&FactoredValue::power_of(&r0, BigUint::from(3u32)));
    let m = n / 2;
    let (even_exp, odd_exp) = antitrace_exponents(m);
    let (x, ratio) = if n.is_multiple_of(2) {
        (FactoredValue::power_of(&init.x0, three_pow(2 * m)).mul(&cycle.pow(&even_exp)), s0)
    } else {
        let x = FactoredValue::power_of(&init.x0, three_pow(2 * m + 1))
            .mul(&FactoredValue::from_rational(&r0))
            .mul(&cycle.pow(&odd_exp));
        (x, s1)
    };
    let y = x.mul(&FactoredValue::from_rational(&ratio));
    Ok(OrbitTerm { n, x, y })
}

/// The case solver matching `classify(p)`, without any prior zero-set check
/// beyond the solver's own.
pub fn solve_case(p: &SystemParams, init: &InitialPair, n: u64) -> Result<OrbitTerm> {
    if p.is_degenerate() {
        return Err(Error::DegenerateParameters);
    }
    match classify(p) {
        CaseTag::RankDeficient => solve_rank_deficient(p, init, n),
        CaseTag::Repeated => solve_repeated(p, init, n),
        CaseTag::Distinct => solve_distinct(p, init, n),
        CaseTag::AntiTraceDistinct => solve_antitrace(p, init, n),
    }
}

/// An eventually trivial orbit: every term from `witness + 1` on is `(0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialReport {
    pub case: CaseTag,
    pub witness: u64,
}

impl TrivialReport {
    pub fn first_zero_term(&self) -> u64 {
        self.witness + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Term(OrbitTerm),
    Trivial(TrivialReport),
}

/// Decides the zero set first, then evaluates the closed form for the case.
///
/// When the zero set can only be scanned (complex eigenvalues), a term with
/// `n ≤ horizon` is still returned, since the scan covers every ratio it needs.
pub fn solve(p: &SystemParams, init: &InitialPair, n: u64, horizon: u64) -> Result<Solution> {
    let verdict = zero_set_member(p, init, horizon)?;
    match verdict.status {
        MembershipStatus::Member => Ok(Solution::Trivial(TrivialReport {
            case: classify(p),
            witness: verdict.witness.expect("members carry a witness"),
        })),
        MembershipStatus::UnknownWithinHorizon if n > horizon => Err(Error::UnknownWithinHorizon { horizon }),
        _ => solve_case(p, init, n).map(Solution::Term),
    }
}

/// `x_n = u_n P_n`, `y_n = v_n P_n` with `P_n = ∏_{k<n} x_k y_k`. Since
/// `P_{n+1} = u_n v_n P_n³`, `P_n = ∏_{k<n} (u_k v_k)^(3^(n-1-k))`.
pub fn reconstruct_general(p: &SystemParams, init: &InitialPair, n: u64) -> Result<OrbitTerm> {
    let states: Vec<LinearState> = linear_states(p, init).take(n as usize + 1).collect();
    let (last, earlier) = states.split_last().expect("at least the initial state");
    if let Some(s) = earlier.iter().find(|s| s.has_zero()) {
        return Err(Error::TrivialSolutionEncountered { index: s.n });
    }
    let product = FactoredValue::new(
        crate::exact_arith::Sign::Positive,
        earlier.iter().map(|s| (&s.u * &s.v, three_pow(n - 1 - s.n))),
    );
    Ok(OrbitTerm {
        n,
        x: product.mul(&FactoredValue::from_rational(&last.u)),
        y: product.mul(&FactoredValue::from_rational(&last.v)),
    })
}

/// Per-index comparison against direct iteration. `None` means the path
/// does not apply at that index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationRow {
    pub n: u64,
    pub x: Rational,
    pub y: Rational,
    pub closed_form: Option<bool>,
    pub reconstruct: Option<bool>,
}

impl VerificationRow {
    pub fn agrees(&self) -> bool {
        self.closed_form != Some(false) && self.reconstruct != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub case: CaseTag,
    /// `None` for degenerate parameters, which have no zero-set statement.
    pub zero_set: Option<ZeroSetVerdict>,
    pub rows: Vec<VerificationRow>,
    pub first_divergence: Option<u64>,
    /// False when the iterates contradict the zero-set verdict.
    pub verdict_consistent: bool,
    /// Set when direct iteration stopped early on the digit budget.
    pub truncated_at: Option<u64>,
}

impl VerificationReport {
    pub fn all_agree(&self) -> bool {
        self.first_divergence.is_none() && self.verdict_consistent
    }
}

/// Runs direct iteration, the case solver and the general reconstruction for
/// `n = 0..=n_max` and records where they agree.
///
/// For an eventually trivial orbit the closed-form path is the zero-set
/// prediction: iterates after the witness must vanish.
pub fn verify(p: &SystemParams, init: &InitialPair, n_max: u64) -> VerificationReport {
    verify_with_budget(p, init, n_max, DEFAULT_HORIZON, DEFAULT_DIGIT_BUDGET)
}

pub fn verify_with_budget(
    p: &SystemParams,
    init: &InitialPair,
    n_max: u64,
    horizon: u64,
    digit_budget: u64,
) -> VerificationReport {
    let case = classify(p);
    let zero_set = zero_set_member(p, init, horizon).ok();

    let mut values = Vec::new();
    let mut truncated_at = None;
    for n in 0..=n_max {
        match iterate_direct_values(p, init, n, digit_budget) {
            Ok(mut v) => values.push(v.pop().expect("nonempty")),
            Err(_) => {
                truncated_at = Some(n);
                break;
            }
        }
    }

    let check = |term: Result<OrbitTerm>, x: &Rational, y: &Rational| -> Option<bool> {
        let term = term.ok()?;
        match term.expand(digit_budget) {
            Ok((tx, ty)) => Some(&tx == x && &ty == y),
            Err(_) => None,
        }
    };
    let witness = zero_set.as_ref().filter(|v| v.is_member()).and_then(|v| v.witness);

    let rows: Vec<VerificationRow> = values
        .iter()
        .enumerate()
        .map(|(n, (x, y))| {
            let n = n as u64;
            let closed_form = match (&zero_set, witness) {
                (_, Some(w)) if n > w => Some(x.is_zero() && y.is_zero()),
                (_, Some(_)) | (None, _) => None,
                (Some(_), None) => check(solve_case(p, init, n), x, y),
            };
            VerificationRow {
                n,
                x: x.clone(),
                y: y.clone(),
                closed_form,
                reconstruct: check(reconstruct_general(p, init, n), x, y),
            }
        })
        .collect();

    let first_divergence = rows.iter().find(|r| !r.agrees()).map(|r| r.n);
    let verdict_consistent = match &zero_set {
        Some(v) if v.status != MembershipStatus::Member => {
            rows.iter().all(|r| !(r.x.is_zero() && r.y.is_zero()))
        }
        _ => true,
    };
    VerificationReport { case, zero_set, rows, first_divergence, verdict_consistent, truncated_at }
}

/// Case solver and general reconstruction agree as factored values at `n`,
/// without expanding either.
pub fn factored_agreement(p: &SystemParams, init: &InitialPair, n: u64) -> Result<bool> {
    Ok(solve_case(p, init, n)? == reconstruct_general(p, init, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const B: u64 = DEFAULT_DIGIT_BUDGET;

    fn sp(a: i64, b: i64, c: i64, d: i64) -> SystemParams {
        SystemParams::from_ints(a, b, c, d)
    }

    fn ip(x: i64, y: i64) -> InitialPair {
        InitialPair::from_ints(x, y)
    }

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn expanded(t: &OrbitTerm) -> (Rational, Rational) {
        t.expand(B).unwrap()
    }

    #[test]
    fn direct_iteration_examples() {
        let v = iterate_direct_values(&sp(1, 1, 1, 1), &ip(1, 1), 2, B).unwrap();
        assert_eq!(v, vec![(q(1), q(1)), (q(2), q(2)), (q(16), q(16))]);
        let v = iterate_direct_values(&sp(2, 3, -1, 1), &ip(0, 5), 2, B).unwrap();
        assert_eq!(v[1..], [(q(0), q(0)), (q(0), q(0))]);
        let v = iterate_direct_values(&sp(1, 1, 1, -1), &ip(1, 2), 2, B).unwrap();
        // x1 = 2 + 4 = 6, y1 = 2 - 4 = -2; x2 = -12·(6 - 2), y2 = -12·(6 + 2)
        assert_eq!(v[1], (q(6), q(-2)));
        assert_eq!(v[2], (q(-48), q(-96)));
        let terms = iterate_direct(&sp(1, 1, 1, 1), &ip(1, 1), 2, B).unwrap();
        assert_eq!(expanded(&terms[2]), (q(16), q(16)));
        assert!(matches!(
            iterate_direct_values(&sp(1, 1, 1, 1), &ip(2, 3), 12, 1000),
            Err(Error::DigitBudgetExceeded { .. })
        ));
    }

    #[test]
    fn cubic_coefficient_examples() {
        let empty = CoeffSequence::new(vec![]).unwrap();
        assert_eq!(cubic_coeff_solve(&empty, &q(7), 0).unwrap().expand(B).unwrap(), q(7));
        let twos = CoeffSequence::constant(q(2), 2).unwrap();
        assert_eq!(cubic_coeff_solve(&twos, &q(1), 2).unwrap().expand(B).unwrap(), q(16));
        let mixed = CoeffSequence::new(vec![q(2), q(3)]).unwrap();
        assert_eq!(cubic_coeff_solve(&mixed, &q(1), 2).unwrap().expand(B).unwrap(), q(24));
        assert_eq!(CoeffSequence::new(vec![q(1), q(0)]), Err(Error::ZeroCoefficient(1)));
        assert!(matches!(cubic_coeff_solve(&mixed, &q(1), 3), Err(Error::SequenceTooShort { .. })));

        // x_{k+1} = a_k x_k³ iterated directly
        let seq = CoeffSequence::new(vec![q(2), Rational::new((-1).into(), 3.into()), q(5)]).unwrap();
        let mut x = Rational::new(3.into(), 2.into());
        for n in 0..=3u64 {
            assert_eq!(cubic_coeff_solve(&seq, &Rational::new(3.into(), 2.into()), n).unwrap().expand(B).unwrap(), x);
            if n < 3 {
                x = &seq.as_slice()[n as usize] * &x * &x * &x;
            }
        }
    }

    #[test]
    fn rank_deficient_examples() {
        let p = sp(1, 1, 1, 1);
        assert_eq!(expanded(&solve_rank_deficient(&p, &ip(1, 1), 2).unwrap()), (q(16), q(16)));
        assert_eq!(expanded(&solve_rank_deficient(&p, &ip(1, 1), 1).unwrap()), (q(2), q(2)));
        assert_eq!(expanded(&solve_rank_deficient(&p, &ip(2, 3), 0).unwrap()), (q(2), q(3)));
        assert_eq!(
            solve_rank_deficient(&p, &ip(1, -1), 3),
            Err(Error::TrivialSolutionEncountered { index: 1 })
        );
        // nilpotent subcase: every pair is eventually trivial
        assert_eq!(
            solve_rank_deficient(&sp(1, 1, -1, -1), &ip(1, 2), 3),
            Err(Error::TrivialSolutionEncountered { index: 2 })
        );
        // a = 0 uses t = d / b
        let p = sp(0, 2, 0, 3);
        let direct = iterate_direct_values(&p, &ip(1, 2), 3, B).unwrap();
        for n in 0..=3 {
            assert_eq!(expanded(&solve_rank_deficient(&p, &ip(1, 2), n).unwrap()), direct[n as usize]);
        }
    }

    #[test]
    fn distinct_examples() {
        let p = sp(2, 1, 1, 2);
        let direct = iterate_direct_values(&p, &ip(1, 2), 3, B).unwrap();
        assert_eq!(expanded(&solve_distinct(&p, &ip(1, 2), 1).unwrap()), (q(8), q(10)));
        assert_eq!(expanded(&solve_distinct(&p, &ip(1, 2), 2).unwrap()), direct[2]);
        assert_eq!(expanded(&solve_distinct(&p, &ip(1, 2), 3).unwrap()), direct[3]);
        assert_eq!(expanded(&solve_distinct(&p, &ip(5, 3), 0).unwrap()), (q(5), q(3)));
        assert!(matches!(solve_distinct(&sp(1, 1, 1, -1), &ip(1, 2), 1), Err(Error::CaseMismatch { .. })));
    }

    #[test]
    fn repeated_examples() {
        let p = sp(3, 1, -1, 1);
        let direct = iterate_direct_values(&p, &ip(1, 2), 3, B).unwrap();
        assert_eq!(expanded(&solve_repeated(&p, &ip(1, 2), 1).unwrap()), (q(10), q(2)));
        assert_eq!(expanded(&solve_repeated(&p, &ip(1, 2), 2).unwrap()), direct[2]);
        assert_eq!(expanded(&solve_repeated(&p, &ip(1, 2), 3).unwrap()), direct[3]);
        assert_eq!(expanded(&solve_repeated(&p, &ip(4, 1), 0).unwrap()), (q(4), q(1)));
        assert_eq!(solve_repeated(&p, &ip(1, -2), 1), Err(Error::TrivialSolutionEncountered { index: 2 }));
    }

    #[test]
    fn antitrace_examples() {
        let p = sp(1, 1, 1, -1);
        let direct = iterate_direct_values(&p, &ip(1, 2), 4, B).unwrap();
        assert_eq!(expanded(&solve_antitrace(&p, &ip(1, 2), 1).unwrap()), (q(6), q(-2)));
        assert_eq!(expanded(&solve_antitrace(&p, &ip(1, 2), 2).unwrap()).0, q(-48));
        for n in 0..=4 {
            assert_eq!(expanded(&solve_antitrace(&p, &ip(1, 2), n).unwrap()), direct[n as usize]);
        }
    }

    #[test]
    fn solve_examples() {
        let p = sp(1, 1, 1, -1);
        assert_eq!(
            solve(&p, &ip(1, 1), 5, 64).unwrap(),
            Solution::Trivial(TrivialReport { case: CaseTag::AntiTraceDistinct, witness: 1 })
        );
        let p = sp(2, 1, 1, 2);
        let direct = iterate_direct_values(&p, &ip(1, 2), 3, B).unwrap();
        let Solution::Term(t) = solve(&p, &ip(1, 2), 3, 64).unwrap() else { panic!("nontrivial") };
        assert_eq!(expanded(&t), direct[3]);
        assert_eq!(solve(&sp(0, 0, 1, 1), &ip(1, 1), 1, 64), Err(Error::DegenerateParameters));
        // complex eigenvalues in Q(√-2): no decision, but n within the scan is fine
        let p = sp(1, 1, -2, 1);
        assert!(matches!(solve(&p, &ip(1, 1), 3, 8), Ok(Solution::Term(_))));
        assert_eq!(solve(&p, &ip(1, 1), 9, 8), Err(Error::UnknownWithinHorizon { horizon: 8 }));
    }

    #[test]
    fn reconstruction_examples() {
        let p = sp(2, 1, 1, 2);
        assert_eq!(reconstruct_general(&p, &ip(1, 2), 2).unwrap(), solve_distinct(&p, &ip(1, 2), 2).unwrap());
        assert_eq!(expanded(&reconstruct_general(&p, &ip(7, -3), 0).unwrap()), (q(7), q(-3)));
        let p = sp(3, 1, -1, 1);
        assert_eq!(reconstruct_general(&p, &ip(1, 2), 3).unwrap(), solve_repeated(&p, &ip(1, 2), 3).unwrap());
        assert!(factored_agreement(&p, &ip(1, 2), 10).unwrap());
        assert_eq!(
            reconstruct_general(&sp(2, 1, 1, 2), &ip(1, -2), 3),
            Err(Error::TrivialSolutionEncountered { index: 1 })
        );
    }

    #[test]
    fn verify_examples() {
        let r = verify(&sp(1, 1, 1, 1), &ip(1, 1), 4);
        assert!(r.all_agree());
        assert!(r.rows.iter().all(|row| row.closed_form == Some(true) && row.reconstruct == Some(true)));

        let r = verify(&sp(1, 1, 1, -1), &ip(1, 1), 4);
        assert_eq!(r.zero_set, Some(ZeroSetVerdict::member(1)));
        assert!(r.all_agree());
        assert!(r.rows[2..].iter().all(|row| row.closed_form == Some(true)));

        let r = verify(&sp(2, 1, 1, 2), &ip(0, 1), 2);
        assert_eq!(r.zero_set, Some(ZeroSetVerdict::member(0)));
        assert!(r.all_agree());
        assert_eq!(r.rows[0].reconstruct, Some(true));
        assert!(r.rows[1..].iter().all(|row| row.x.is_zero() && row.y.is_zero()));

        let r = verify_with_budget(&sp(2, 1, 1, 2), &ip(2, 3), 10, 64, 1000);
        assert!(r.truncated_at.is_some());
    }

    fn params_in(case: CaseTag) -> impl Strategy<Value = SystemParams> {
        (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3)
            .prop_map(|(a, b, c, d)| sp(a, b, c, d))
            .prop_filter("case", move |p| !p.is_degenerate() && classify(p) == case)
    }

    fn any_case() -> impl Strategy<Value = SystemParams> {
        prop_oneof![
            params_in(CaseTag::RankDeficient),
            params_in(CaseTag::Distinct),
            params_in(CaseTag::AntiTraceDistinct),
            // repeated eigenvalues are rare in a uniform grid
            (1i64..=3, -3i64..=3).prop_filter("b ≠ 0", |(_, b)| *b != 0).prop_map(|(m, b)| {
                // (a - d)² + 4bc = 4b² - 4b² = 0
                sp(m + b, b, -b, m - b)
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn solvers_match_direct_iteration(p in any_case(), x in -3i64..=3, y in -3i64..=3) {
            let init = ip(x, y);
            prop_assume!(!zero_set_member(&p, &init, 64).unwrap().is_member());
            let direct = iterate_direct_values(&p, &init, 6, B).unwrap();
            for n in 0..=6u64 {
                let term = solve_case(&p, &init, n).unwrap();
                prop_assert_eq!(expanded(&term), direct[n as usize].clone());
                prop_assert_eq!(reconstruct_general(&p, &init, n).unwrap(), term);
            }
        }

        #[test]
        fn homogeneous_scaling(
            p in any_case(),
            x in -3i64..=3,
            y in -3i64..=3,
            t in prop::sample::select(vec![(-2i64, 1i64), (-1, 2), (3, 1)]),
        ) {
            let init = ip(x, y);
            prop_assume!(!zero_set_member(&p, &init, 64).unwrap().is_member());
            let t = Rational::new(t.0.into(), t.1.into());
            let scaled = InitialPair::new(&t * &init.x0, &t * &init.y0);
            for n in 0..=5u64 {
                let factor = FactoredValue::power_of(&t, three_pow(n));
                let base = solve_case(&p, &init, n).unwrap();
                let term = solve_case(&p, &scaled, n).unwrap();
                prop_assert_eq!(term.x, base.x.mul(&factor));
                prop_assert_eq!(term.y, base.y.mul(&factor));
            }
        }

        #[test]
        fn swap_symmetry(p in any_case(), x in -3i64..=3, y in -3i64..=3) {
            let init = ip(x, y);
            prop_assume!(!zero_set_member(&p, &init, 64).unwrap().is_member());
            for n in 0..=6u64 {
                let term = solve_case(&p, &init, n).unwrap();
                let mirrored = solve_case(&p.swapped(), &init.swapped(), n).unwrap();
                prop_assert_eq!(term.x, mirrored.y);
                prop_assert_eq!(term.y, mirrored.x);
            }
        }

        #[test]
        fn ratio_identity(p in any_case(), x in -3i64..=3, y in -3i64..=3) {
            let init = ip(x, y);
            prop_assume!(!zero_set_member(&p, &init, 64).unwrap().is_member());
            for (n, s) in linear_states(&p, &init).take(9).enumerate() {
                let term = solve_case(&p, &init, n as u64).unwrap();
                // compare y = r·x without expanding the 3^8-sized values
                let r = FactoredValue::from_rational(&(&s.v / &s.u));
                prop_assert_eq!(term.y, term.x.mul(&r));
            }
        }

        #[test]
        fn constant_coefficient_collapse(
            a in -3i64..=3,
            b in -3i64..=3,
            x in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
        ) {
            prop_assume!(a + b != 0);
            let p = sp(a, b, a, b);
            let init = ip(x, x);
            let direct = iterate_direct_values(&p, &init, 6, B).unwrap();
            let seq = CoeffSequence::constant(q(a + b), 6).unwrap();
            for n in 0..=6u64 {
                let via_coeffs = cubic_coeff_solve(&seq, &q(x), n).unwrap();
                prop_assert_eq!(&via_coeffs.expand(B).unwrap(), &direct[n as usize].0);
                prop_assert_eq!(&direct[n as usize].0, &direct[n as usize].1);
                let Solution::Term(t) = solve(&p, &init, n, 64).unwrap() else { panic!("a + b ≠ 0") };
                prop_assert_eq!(t.x, via_coeffs);
            }
        }
    }
}
