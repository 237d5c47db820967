//! Univariate polynomials with rational coefficients and real-root
//! isolation on `[0, 1]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{half, int, to_f64, to_fraction_string, Rational};

/// `coeffs[i]` multiplies `p^i`. Trailing zeros are always trimmed, so the
/// zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    /// The identity polynomial `p`.
    pub fn var() -> Self {
        UniPoly::new(vec![Rational::zero(), Rational::one()])
    }

    /// `a + b p`.
    pub fn affine(a: Rational, b: Rational) -> Self {
        UniPoly::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, k: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, k: usize) -> UniPoly {
        (0..k).fold(UniPoly::one(), |acc, _| &acc * self)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let lead = d.leading().expect("division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let factor = &rem[i] / lead;
            if factor.is_zero() {
                continue;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &factor * c;
            }
            quot[i - dd] = factor;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            Some(l) => self.scale(&(Rational::one() / l)),
            None => UniPoly::zero(),
        }
    }

    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn square_free(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = UniPoly::gcd(self, &self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(to_fraction_string).collect()
    }
}

impl Serialize for UniPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "p")?,
                _ => write!(f, "p^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        UniPoly::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(r: &Rational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }
}

/// A real root located in `[lo, hi]`. When `exact`, `lo == hi` is the root.
/// Otherwise the root lies strictly inside and neither endpoint is a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
    pub exact: bool,
}

impl IsolatedRoot {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if self.exact {
            x == &self.lo
        } else {
            &self.lo < x && x < &self.hi
        }
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) * half()
    }

    pub fn approx(&self) -> f64 {
        to_f64(&self.midpoint())
    }
}

struct Sturm {
    chain: Vec<UniPoly>,
}

impl Sturm {
    fn new(p: &UniPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[k - 2].div_rem(&chain[k - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        Sturm { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let signs: Vec<Sign> = self
            .chain
            .iter()
            .map(|q| Sign::of(&q.eval(x)))
            .filter(|s| *s != Sign::Zero)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Isolates every distinct real root of `p` in `[0, 1]` to width `<= tol`.
/// Fails on a non-positive tolerance; the zero polynomial has no isolated
/// roots (callers must check for it).
pub fn isolate_roots_unit(p: &UniPoly, tol: &Rational) -> Result<Vec<IsolatedRoot>> {
    if !tol.is_positive() {
        return Err(Error::NonPositiveTolerance);
    }
    if p.is_zero() {
        return Ok(Vec::new());
    }
    let sq = p.square_free();
    let sturm = Sturm::new(&sq);
    let zero = Rational::zero();
    let one = Rational::one();
    let mut roots = Vec::new();
    for end in [&zero, &one] {
        if sq.eval(end).is_zero() {
            roots.push(IsolatedRoot {
                lo: end.clone(),
                hi: end.clone(),
                exact: true,
            });
        }
    }
    isolate_open(&sq, &sturm, zero, one, tol, &mut roots);
    roots.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(roots)
}

/// Roots strictly inside `(a, b)`; `a` and `b` may themselves be roots.
fn isolate_open(
    sq: &UniPoly,
    sturm: &Sturm,
    a: Rational,
    b: Rational,
    tol: &Rational,
    out: &mut Vec<IsolatedRoot>,
) {
    let b_is_root = sq.eval(&b).is_zero();
    let count = sturm.count(&a, &b) - usize::from(b_is_root);
    if count == 0 {
        return;
    }
    if count == 1 {
        let lo = shrink_from_left(sq, sturm, a, &b);
        let hi = shrink_from_right(sq, sturm, &lo, b);
        out.push(refine(sq, lo, hi, tol));
        return;
    }
    let mid = (&a + &b) * half();
    if sq.eval(&mid).is_zero() {
        out.push(IsolatedRoot {
            lo: mid.clone(),
            hi: mid.clone(),
            exact: true,
        });
    }
    isolate_open(sq, sturm, a, mid.clone(), tol, out);
    isolate_open(sq, sturm, mid, b, tol, out);
}

/// Moves a root endpoint `a` inward until it is a non-root with no root in
/// between. Requires a root in `(a, b)`.
fn shrink_from_left(sq: &UniPoly, sturm: &Sturm, a: Rational, b: &Rational) -> Rational {
    if !sq.eval(&a).is_zero() {
        return a;
    }
    let mut step = (b - &a) * half();
    loop {
        let cand = &a + &step;
        if sturm.count(&a, &cand) == 0 {
            return cand;
        }
        step *= half();
    }
}

fn shrink_from_right(sq: &UniPoly, sturm: &Sturm, a: &Rational, b: Rational) -> Rational {
    if !sq.eval(&b).is_zero() {
        return b;
    }
    let mut step = (&b - a) * half();
    loop {
        let cand = &b - &step;
        // (cand, b] holds exactly the root at b
        if sturm.count(&cand, &b) == 1 && !sq.eval(&cand).is_zero() {
            return cand;
        }
        step *= half();
    }
}

fn refine(sq: &UniPoly, mut lo: Rational, mut hi: Rational, tol: &Rational) -> IsolatedRoot {
    let lo_sign = Sign::of(&sq.eval(&lo));
    while &(&hi - &lo) > tol {
        let mid = (&lo + &hi) * half();
        let s = Sign::of(&sq.eval(&mid));
        if s == Sign::Zero {
            return IsolatedRoot {
                lo: mid.clone(),
                hi: mid,
                exact: true,
            };
        }
        if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    IsolatedRoot {
        lo,
        hi,
        exact: false,
    }
}

/// Sign of `p` on each open gap between consecutive isolated roots of `p`
/// in `[0, 1]`: entry `i` is the gap left of root `i`, the last entry is
/// the gap right of the last root. A gap that is empty (root exactly at 0
/// or 1) reports `None`.
pub fn gap_signs(p: &UniPoly, roots: &[IsolatedRoot]) -> Vec<Option<Sign>> {
    let mut boundaries: Vec<(Rational, bool)> = vec![(Rational::zero(), false)];
    for r in roots {
        boundaries.push((r.lo.clone(), r.exact));
        boundaries.push((r.hi.clone(), r.exact));
    }
    boundaries.push((Rational::one(), false));
    boundaries
        .chunks(2)
        .map(|pair| {
            let (left, left_exact) = &pair[0];
            let (right, right_exact) = &pair[1];
            let sample = if left < right {
                (left + right) * half()
            } else if !left_exact && !right_exact {
                left.clone()
            } else {
                return None;
            };
            Some(Sign::of(&p.eval(&sample)))
        })
        .collect()
}
