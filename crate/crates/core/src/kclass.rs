//! Sparse integer combinations of torus monomials `t1^a t2^b u^w`, and the
//! sign of a monomial under the chosen one-parameter subgroup.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{BowError, Result};
use crate::scalar::Scalar;

/// `t1^a t2^b ∏ u_i^{w_i}`. Ordered lexicographically on `(b, a, w)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub b: i64,
    pub a: i64,
    pub w: Vec<i64>,
}

impl Monomial {
    pub fn new(a: i64, b: i64, w: Vec<i64>) -> Self {
        Monomial { b, a, w }
    }

    /// `t1^a t2^b` with trivial u-part.
    pub fn t(n: usize, a: i64, b: i64) -> Self {
        Monomial { b, a, w: vec![0; n] }
    }

    /// `t1^a t2^b u_beta u_alpha^{-1}` (0-based indices).
    pub fn with_ratio(n: usize, a: i64, b: i64, beta: usize, alpha: usize) -> Self {
        let mut w = vec![0; n];
        w[beta] += 1;
        w[alpha] -= 1;
        Monomial { b, a, w }
    }

    pub fn is_torus_trivial(&self) -> bool {
        self.a == 0 && self.b == 0 && self.w.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.w.len(), other.w.len(), "rank mismatch");
        let add = |x: i64, y: i64| x.checked_add(y).expect("exponent overflow");
        Monomial {
            b: add(self.b, other.b),
            a: add(self.a, other.a),
            w: self.w.iter().zip(&other.w).map(|(&x, &y)| add(x, y)).collect(),
        }
    }

    pub fn inverse(&self) -> Monomial {
        Monomial {
            b: -self.b,
            a: -self.a,
            w: self.w.iter().map(|x| -x).collect(),
        }
    }

    /// `(β, α)` if the u-part is `u_β u_α^{-1}`, `None` if it is trivial.
    pub fn ratio_indices(&self) -> Result<Option<(usize, usize)>> {
        let mut plus = None;
        let mut minus = None;
        for (i, &x) in self.w.iter().enumerate() {
            match x {
                0 => {}
                1 if plus.is_none() => plus = Some(i),
                -1 if minus.is_none() => minus = Some(i),
                _ => return Err(BowError::UnsupportedWeight(self.w.clone())),
            }
        }
        match (plus, minus) {
            (None, None) => Ok(None),
            (Some(b), Some(a)) => Ok(Some((b, a))),
            _ => Err(BowError::UnsupportedWeight(self.w.clone())),
        }
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, var: &str, e: i64) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => write!(f, "{var}"),
        _ => write!(f, "{var}^{e}"),
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_torus_trivial() {
            return write!(f, "1");
        }
        write_power(f, "t1", self.a)?;
        write_power(f, "t2", self.b)?;
        for (i, &x) in self.w.iter().enumerate() {
            write_power(f, &format!("u{}", i + 1), x)?;
        }
        Ok(())
    }
}

/// One term of the JSON form of a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTerm {
    pub a: i64,
    pub b: i64,
    pub w: Vec<i64>,
    pub coeff: i64,
}

/// Integer combination of monomials in `t1, t2, u_1..u_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KClass {
    n: usize,
    terms: BTreeMap<Monomial, i64>,
}

impl KClass {
    pub fn zero(n: usize) -> Self {
        KClass {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_monomial(mono: Monomial) -> Self {
        let mut out = KClass::zero(mono.w.len());
        out.add_term(mono, 1);
        out
    }

    pub fn from_kterms(n: usize, terms: &[KTerm]) -> Result<Self> {
        let mut out = KClass::zero(n);
        for t in terms {
            if t.w.len() != n {
                return Err(BowError::RankMismatch(n, t.w.len()));
            }
            out.add_term(Monomial::new(t.a, t.b, t.w.clone()), t.coeff);
        }
        Ok(out)
    }

    pub fn kterms(&self) -> Vec<KTerm> {
        self.terms
            .iter()
            .map(|(mono, &coeff)| KTerm {
                a: mono.a,
                b: mono.b,
                w: mono.w.clone(),
                coeff,
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, mono: &Monomial) -> i64 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    /// Number of distinct monomials.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Sum of all coefficients, the rank of the represented module.
    pub fn dimension(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: i64) {
        assert_eq!(mono.w.len(), self.n, "rank mismatch");
        if coeff == 0 {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    fn check_rank(&self, other: &KClass) -> Result<()> {
        if self.n != other.n {
            Err(BowError::RankMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &KClass) -> Result<KClass> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &KClass) -> Result<KClass> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> KClass {
        let mut out = KClass::zero(self.n);
        if k != 0 {
            out.terms = self.terms.iter().map(|(m, &c)| (m.clone(), c * k)).collect();
        }
        out
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> KClass {
        assert_eq!(mono.w.len(), self.n, "rank mismatch");
        KClass {
            n: self.n,
            terms: self.terms.iter().map(|(m, &c)| (m.mul(mono), c)).collect(),
        }
    }

    /// Inverts every monomial.
    pub fn dual(&self) -> KClass {
        KClass {
            n: self.n,
            terms: self.terms.iter().map(|(m, &c)| (m.inverse(), c)).collect(),
        }
    }

    /// Substitutes `u_j ↔ u_{j+1}` (0-based `j`).
    pub fn swap_u(&self, j: usize) -> Result<KClass> {
        if j + 1 >= self.n {
            return Err(BowError::IndexOutOfRange { index: j, len: self.n });
        }
        Ok(KClass {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| {
                    let mut m = m.clone();
                    m.w.swap(j, j + 1);
                    (m, c)
                })
                .collect(),
        })
    }

    /// Whether the class is invariant under `μ ↦ t1 t2 μ^{-1}`.
    pub fn is_symplectic(&self) -> bool {
        let t1t2 = Monomial::t(self.n, 1, 1);
        self.dual().mul_monomial(&t1t2) == *self
    }

    /// Counts monomials (with multiplicity) of negative and positive weight.
    pub fn sign_counts(&self, orientation: GammaOrientation) -> Result<(i64, i64)> {
        let (mut neg, mut pos) = (0, 0);
        for (m, c) in self.terms() {
            match gamma_sign(m, orientation)? {
                WeightSign::Negative => neg += c,
                WeightSign::Positive => pos += c,
                WeightSign::Zero => return Err(BowError::ZeroWeight(m.to_string())),
            }
        }
        Ok((neg, pos))
    }
}

impl Serialize for KClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.kterms().serialize(s)
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let sep = if k == 0 { "" } else { " + " };
            if c == 1 {
                write!(f, "{sep}{m}")?;
            } else {
                write!(f, "{sep}{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &KClass {
    type Output = KClass;
    fn add(self, rhs: &KClass) -> KClass {
        self.checked_add(rhs).expect("rank mismatch")
    }
}

impl Sub for &KClass {
    type Output = KClass;
    fn sub(self, rhs: &KClass) -> KClass {
        self.checked_sub(rhs).expect("rank mismatch")
    }
}

impl Neg for &KClass {
    type Output = KClass;
    fn neg(self) -> KClass {
        self.scale(-1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightSign {
    Negative,
    Zero,
    Positive,
}

impl From<std::cmp::Ordering> for WeightSign {
    fn from(o: std::cmp::Ordering) -> Self {
        match o {
            std::cmp::Ordering::Less => WeightSign::Negative,
            std::cmp::Ordering::Equal => WeightSign::Zero,
            std::cmp::Ordering::Greater => WeightSign::Positive,
        }
    }
}

/// Ordering of the u-weights in the one-parameter subgroup.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GammaOrientation {
    /// `r_1 > r_2 > … > r_n`: `u_β u_α^{-1}` is negative iff `β > α`.
    #[default]
    Standard,
    /// `r_1 < … < r_n`.
    Reversed,
}

/// Sign of the pairing of a monomial with `γ`, where the `t2` weight
/// dominates the u-weights, which dominate the `t1` weight.
pub fn gamma_sign(mono: &Monomial, orientation: GammaOrientation) -> Result<WeightSign> {
    if mono.b != 0 {
        return Ok(mono.b.cmp(&0).into());
    }
    if let Some((beta, alpha)) = mono.ratio_indices()? {
        let s = match orientation {
            GammaOrientation::Standard => alpha.cmp(&beta),
            GammaOrientation::Reversed => beta.cmp(&alpha),
        };
        return Ok(s.into());
    }
    Ok(mono.a.cmp(&0).into())
}

/// `a ε1 + b ε2 + Σ w_i a_i`, the weight of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinearForm {
    pub eps1: i64,
    pub eps2: i64,
    pub a: Vec<i64>,
}

impl LinearForm {
    pub fn evaluate<S: Scalar>(&self, eps1: &S, eps2: &S, a: &[S]) -> S {
        assert_eq!(a.len(), self.a.len(), "rank mismatch");
        let mut acc = S::from_i64(self.eps1) * eps1.clone() + S::from_i64(self.eps2) * eps2.clone();
        for (&w, x) in self.a.iter().zip(a) {
            if w != 0 {
                acc = acc + S::from_i64(w) * x.clone();
            }
        }
        acc
    }
}

impl From<&Monomial> for LinearForm {
    fn from(m: &Monomial) -> Self {
        LinearForm {
            eps1: m.a,
            eps2: m.b,
            a: m.w.clone(),
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let names = ["e1".to_string(), "e2".to_string()]
            .into_iter()
            .chain((1..=self.a.len()).map(|i| format!("a{i}")));
        let coeffs = [self.eps1, self.eps2].into_iter().chain(self.a.iter().copied());
        for (name, c) in names.zip(coeffs) {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            match c.abs() {
                1 => write!(f, "{sign}{name}")?,
                k => write!(f, "{sign}{k}{name}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// One linear form per monomial, repeated by coefficient.
pub fn euler_linear_forms(x: &KClass) -> Result<Vec<LinearForm>> {
    let mut out = Vec::new();
    for (m, c) in x.terms() {
        if c <= 0 {
            return Err(BowError::NonEffective {
                monomial: m.to_string(),
                coeff: c,
            });
        }
        for _ in 0..c {
            out.push(LinearForm::from(m));
        }
    }
    Ok(out)
}
