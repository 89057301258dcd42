//! Negative continued fractions.
//!
//! A sequence `[a_1, ..., a_n]` denotes `a_1 - 1/(a_2 - 1/(... - 1/a_n))`.
//! With every entry >= 2 the value is a rational > 1 and the expansion is
//! unique. The relaxed form with last entry >= 1 appears when an expansion is
//! decremented in place, e.g. `[a_1, ..., a_n - 1]`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated negative-continued-fraction coefficient sequence.
///
/// Invariant: nonempty, every entry except possibly the last is >= 2, and the
/// last entry is >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cfrac(Vec<i64>);

impl Cfrac {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        validate_coeffs(&coeffs)?;
        Ok(Cfrac(coeffs))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn eval(&self) -> Result<BigRational> {
        eval_neg_cf(&self.0)
    }
}

fn validate_coeffs(coeffs: &[i64]) -> Result<()> {
    if coeffs.is_empty() {
        return Err(Error::usage("empty coefficient sequence"));
    }
    let last = coeffs.len() - 1;
    for (i, &c) in coeffs.iter().enumerate() {
        let floor = if i == last { 1 } else { 2 };
        if c < floor {
            return Err(Error::usage(format!(
                "coefficient {c} at position {i} is below {floor}"
            )));
        }
    }
    Ok(())
}

/// Evaluates `[a_1, ..., a_n]` as an exact reduced rational.
pub fn eval_neg_cf(coeffs: &[i64]) -> Result<BigRational> {
    validate_coeffs(coeffs)?;
    let mut value = BigRational::from_integer(BigInt::from(*coeffs.last().unwrap()));
    for &a in coeffs[..coeffs.len() - 1].iter().rev() {
        if value.is_zero() {
            return Err(Error::DegenerateExpansion);
        }
        value = BigRational::from_integer(BigInt::from(a)) - value.recip();
    }
    Ok(value)
}

/// Expands a reduced rational p/q with p > q >= 1 into its unique all->=2
/// sequence by repeated ceiling division.
pub fn expand_neg_cf(x: &BigRational) -> Result<Vec<i64>> {
    if x <= &BigRational::one() {
        return Err(Error::usage(format!("{x} is not > 1")));
    }
    let mut p = x.numer().clone();
    let mut q = x.denom().clone();
    let mut coeffs = Vec::new();
    while !q.is_zero() {
        // a = ceil(p/q), then p/q <- 1/(a - p/q) = q/(a*q - p)
        let a = num::integer::div_ceil(p.clone(), q.clone());
        let next_q = &a * &q - &p;
        coeffs.push(i64::try_from(&a).map_err(|_| Error::usage("coefficient exceeds i64 range"))?);
        p = q;
        q = next_q;
    }
    Ok(coeffs)
}

/// The final two convergents of an all->=2 expansion: p/q = [a_1..a_n] and
/// pPrev/qPrev = [a_1..a_{n-1}], with pPrev/qPrev = 1/0 when n = 1 so that
/// the determinant identity pPrev*q - qPrev*p = 1 holds uniformly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergents {
    pub p: BigInt,
    pub q: BigInt,
    pub p_prev: BigInt,
    pub q_prev: BigInt,
}

impl Convergents {
    /// pPrev*q - qPrev*p, which equals 1 for every valid input.
    pub fn determinant(&self) -> BigInt {
        &self.p_prev * &self.q - &self.q_prev * &self.p
    }
}

/// Computes both convergents by the linear recurrence
/// `p_k = a_k p_{k-1} - p_{k-2}`, `q_k = a_k q_{k-1} - q_{k-2}`.
pub fn convergents(coeffs: &[i64]) -> Result<Convergents> {
    validate_coeffs(coeffs)?;
    if coeffs.iter().any(|&c| c < 2) {
        return Err(Error::usage("convergents need every entry >= 2"));
    }
    let mut p_prev = BigInt::one();
    let mut q_prev = BigInt::zero();
    let mut p = BigInt::from(coeffs[0]);
    let mut q = BigInt::one();
    for &a in &coeffs[1..] {
        let p_next = BigInt::from(a) * &p - &p_prev;
        let q_next = BigInt::from(a) * &q - &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    Ok(Convergents {
        p,
        q,
        p_prev,
        q_prev,
    })
}

/// Outcome of one appendix lemma check, with the values that were compared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaCheck {
    Holds { lhs: String, rhs: String },
    NotApplicable { reason: String },
    Fails { lhs: String, rhs: String },
}

impl LemmaCheck {
    pub fn holds_or_na(&self) -> bool {
        !matches!(self, LemmaCheck::Fails { .. })
    }

    fn compare(lhs: impl ToString, rhs: impl ToString, ok: bool) -> Self {
        if ok {
            LemmaCheck::Holds {
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            }
        } else {
            LemmaCheck::Fails {
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            }
        }
    }
}

/// Report of the four continued-fraction lemmas for one coefficient tuple:
///
/// 1. `p >= 2q+1 > q+q'+1` (needs `a_1 >= 3`);
/// 2. `gcd(q'+1, q) = gcd(p-1, q)` and `gcd(q'-1, q) = gcd(p+1, q)`;
/// 3. `(p-p')/(q-q') = [a_1, ..., a_n - 1]`;
/// 4. `(p-q)/(p'-q') = [a_n, ..., a_1 - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub coeffs: Vec<i64>,
    pub growth: LemmaCheck,
    pub gcd_symmetry: LemmaCheck,
    pub decrement_last: LemmaCheck,
    pub reversed_decrement: LemmaCheck,
}

impl AppendixReport {
    pub fn all_hold(&self) -> bool {
        self.growth.holds_or_na()
            && self.gcd_symmetry.holds_or_na()
            && self.decrement_last.holds_or_na()
            && self.reversed_decrement.holds_or_na()
    }
}

/// Checks the four appendix lemmas on a tuple with all entries >= 2.
pub fn verify_appendix(coeffs: &[i64]) -> Result<AppendixReport> {
    let c = convergents(coeffs)?;
    let (p, q, pp, qp) = (&c.p, &c.q, &c.p_prev, &c.q_prev);

    let growth = if coeffs[0] < 3 {
        LemmaCheck::NotApplicable {
            reason: format!("a_1 = {} < 3", coeffs[0]),
        }
    } else {
        let two_q_1 = BigInt::from(2) * q + 1;
        let q_qp_1 = q + qp + 1;
        LemmaCheck::compare(
            format!("p = {p}"),
            format!("2q+1 = {two_q_1}, q+q'+1 = {q_qp_1}"),
            p >= &two_q_1 && two_q_1 > q_qp_1,
        )
    };

    let g_plus = (qp + 1i32).gcd(q);
    let g_minus_p = (p - 1i32).gcd(q);
    let g_minus = (qp - 1i32).abs().gcd(q);
    let g_plus_p = (p + 1i32).gcd(q);
    let gcd_symmetry = LemmaCheck::compare(
        format!("({g_plus}, {g_minus})"),
        format!("({g_minus_p}, {g_plus_p})"),
        g_plus == g_minus_p && g_minus == g_plus_p,
    );

    let mut decremented = coeffs.to_vec();
    *decremented.last_mut().unwrap() -= 1;
    let lhs3 = BigRational::new(p - pp, q - qp);
    let rhs3 = eval_neg_cf(&decremented)?;
    let decrement_last = LemmaCheck::compare(&lhs3, &rhs3, lhs3 == rhs3);

    let mut reversed: Vec<i64> = coeffs.iter().rev().copied().collect();
    *reversed.last_mut().unwrap() -= 1;
    let lhs4 = BigRational::new(p - q, pp - qp);
    let rhs4 = eval_neg_cf(&reversed)?;
    let reversed_decrement = LemmaCheck::compare(&lhs4, &rhs4, lhs4 == rhs4);

    Ok(AppendixReport {
        coeffs: coeffs.to_vec(),
        growth,
        gcd_symmetry,
        decrement_last,
        reversed_decrement,
    })
}
