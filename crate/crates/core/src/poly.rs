//! Multivariate polynomials over F_p in exact canonical form.
//!
//! A polynomial is a map from exponent vectors to nonzero residues; no zero
//! coefficient is ever stored, so structural equality is ring equality.
//! Exponents are `u128` with checked arithmetic: bracket powers such as
//! q = p^e stay far below the limit at the supported moduli, and any
//! overflow is a loud error rather than a wrap.

use crate::error::{Error, Result};
use crate::fp;
use crate::order::MonomialOrder;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// The order used for display and other canonical choices.
pub const DISPLAY_ORDER: MonomialOrder = MonomialOrder::GrevLex;

/// Ring signature: the characteristic and the named variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PolyRing {
    p: u64,
    vars: Arc<Vec<String>>,
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(p: u64, vars: &[S]) -> Result<PolyRing> {
        fp::check_modulus(p)?;
        let names: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, v) in names.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::Invalid("empty variable name".into()));
            }
            if names[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable {v}")));
            }
        }
        Ok(PolyRing {
            p,
            vars: Arc::new(names),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> MultiPoly {
        self.constant(1)
    }

    pub fn constant(&self, c: i128) -> MultiPoly {
        let v = fp::reduce_i128(c, self.p);
        let mut terms = BTreeMap::new();
        if v != 0 {
            terms.insert(Monomial::one(self.nvars()), v);
        }
        MultiPoly {
            ring: self.clone(),
            terms,
        }
    }

    pub fn var(&self, name: &str) -> Result<MultiPoly> {
        let i = self
            .var_index(name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable {name}")))?;
        Ok(self.var_by_index(i))
    }

    pub fn var_by_index(&self, i: usize) -> MultiPoly {
        let mut exps = vec![0u128; self.nvars()];
        exps[i] = 1;
        self.monomial(Monomial::new(exps), 1)
    }

    pub fn monomial(&self, m: Monomial, coeff: i128) -> MultiPoly {
        assert_eq!(m.len(), self.nvars(), "exponent arity mismatch");
        let v = fp::reduce_i128(coeff, self.p);
        let mut terms = BTreeMap::new();
        if v != 0 {
            terms.insert(m, v);
        }
        MultiPoly {
            ring: self.clone(),
            terms,
        }
    }

    /// All monomials of total degree at most `d`, in deterministic order.
    pub fn monomials_up_to_degree(&self, d: u128) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u128; self.nvars()];
        fn rec(out: &mut Vec<Monomial>, cur: &mut Vec<u128>, i: usize, left: u128) {
            if i == cur.len() {
                out.push(Monomial::new(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(out, cur, i + 1, left - e);
            }
            cur[i] = 0;
        }
        rec(&mut out, &mut current, 0, d);
        out.sort();
        out
    }

    /// All monomials with every exponent strictly below `bound`
    /// (the truncated basis used by p^{-e}-linear calculus).
    pub fn box_monomials(&self, bound: u128) -> Vec<Monomial> {
        let n = self.nvars();
        let mut out = Vec::new();
        let mut cur = vec![0u128; n];
        loop {
            out.push(Monomial::new(cur.clone()));
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < bound {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}

/// An exponent vector.  The derived `Ord` (plain lexicographic on the
/// vector) is only used for canonical storage; semantic comparisons go
/// through a `MonomialOrder`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(Vec<u128>);

impl Monomial {
    pub fn new(exps: Vec<u128>) -> Monomial {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Monomial {
        Monomial(vec![0; n])
    }

    pub fn exps(&self) -> &[u128] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn deg(&self) -> u128 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_add(*b).ok_or(Error::ExponentOverflow)?);
        }
        Ok(Monomial(out))
    }

    /// Exact division; caller must ensure divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_sub(*b).expect("monomial not divisible"))
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn try_pow(&self, e: u128) -> Result<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for a in &self.0 {
            out.push(a.checked_mul(e).ok_or(Error::ExponentOverflow)?);
        }
        Ok(Monomial(out))
    }

    pub fn permute(&self, perm: &[usize]) -> Monomial {
        Monomial(perm.iter().map(|&i| self.0[i]).collect())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// A multivariate polynomial in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    ring: PolyRing,
    terms: BTreeMap<Monomial, u64>,
}

impl MultiPoly {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().map_or(false, |(m, &c)| m.is_one() && c == 1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn total_deg(&self) -> u128 {
        self.terms.keys().map(|m| m.deg()).max().unwrap_or(0)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, i128)>>(
        ring: &PolyRing,
        terms: I,
    ) -> MultiPoly {
        let mut acc = ring.zero();
        for (m, c) in terms {
            acc.add_term(m, fp::reduce_i128(c, ring.p()));
        }
        acc
    }

    fn add_term(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        debug_assert_eq!(m.len(), self.ring.nvars());
        let p = self.ring.p();
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = fp::add(*o.get(), c, p);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_ring(&self, other: &MultiPoly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::SignatureMismatch(format!(
                "{:?}[p={}] vs {:?}[p={}]",
                self.ring.vars(),
                self.ring.p(),
                other.ring.vars(),
                other.ring.p()
            )));
        }
        Ok(())
    }

    /// Exact ring arithmetic; the single entry point behind the operators.
    pub fn arith(&self, other: &MultiPoly, op: ArithOp) -> Result<MultiPoly> {
        self.check_ring(other)?;
        let p = self.ring.p();
        match op {
            ArithOp::Add | ArithOp::Sub => {
                let mut out = self.clone();
                for (m, &c) in &other.terms {
                    let c = if op == ArithOp::Sub { fp::neg(c, p) } else { c };
                    out.add_term(m.clone(), c);
                }
                Ok(out)
            }
            ArithOp::Mul => {
                let mut out = self.ring.zero();
                for (ma, &ca) in &self.terms {
                    for (mb, &cb) in &other.terms {
                        out.add_term(ma.try_mul(mb)?, fp::mul(ca, cb, p));
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn neg(&self) -> MultiPoly {
        let p = self.ring.p();
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), fp::neg(c, p)))
                .collect(),
        }
    }

    pub fn scale(&self, c: u64) -> MultiPoly {
        let p = self.ring.p();
        let c = c % p;
        if c == 0 {
            return self.ring.zero();
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, &a)| (m.clone(), fp::mul(a, c, p)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u64) -> Result<MultiPoly> {
        let p = self.ring.p();
        let c = c % p;
        if c == 0 {
            return Ok(self.ring.zero());
        }
        let mut terms = BTreeMap::new();
        for (mm, &a) in &self.terms {
            terms.insert(mm.try_mul(m)?, fp::mul(a, c, p));
        }
        Ok(MultiPoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn pow(&self, e: u128) -> Result<MultiPoly> {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.arith(&base, ArithOp::Mul)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.arith(&base, ArithOp::Mul)?;
            }
        }
        Ok(acc)
    }

    /// a^(p^e): the Frobenius iterate.  Over F_p the coefficients are fixed
    /// and exponent vectors scale by p^e.
    pub fn frobenius_pow(&self, e: u32) -> Result<MultiPoly> {
        if e == 0 {
            return Err(Error::Invalid("frobenius_pow requires e >= 1".into()));
        }
        let q = checked_q(self.ring.p(), e)?;
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            terms.insert(m.try_pow(q)?, c);
        }
        Ok(MultiPoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Substitute `images[i]` for variable `i`.  All images must live in one
    /// common ring; constants land there too.
    pub fn eval(&self, target: &PolyRing, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Invalid(format!(
                "expected {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        if target.p() != self.ring.p() {
            return Err(Error::SignatureMismatch(
                "characteristic mismatch in substitution".into(),
            ));
        }
        for im in images {
            if im.ring() != target {
                return Err(Error::SignatureMismatch(
                    "substitution image outside target ring".into(),
                ));
            }
        }
        let mut acc = target.zero();
        for (m, &c) in &self.terms {
            let mut term = target.constant(c as i128);
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    term = term.arith(&images[i].pow(e)?, ArithOp::Mul)?;
                }
            }
            acc = acc.arith(&term, ArithOp::Add)?;
        }
        Ok(acc)
    }

    /// Move this polynomial into `target`, matching variables by name.
    pub fn rename_into(&self, target: &PolyRing) -> Result<MultiPoly> {
        let images: Vec<MultiPoly> = self
            .ring
            .vars()
            .iter()
            .map(|v| target.var(v))
            .collect::<Result<_>>()?;
        self.eval(target, &images)
    }

    pub fn leading_term(&self, ord: MonomialOrder) -> Option<(&Monomial, u64)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| ord.cmp(a, b))
            .map(|(m, &c)| (m, c))
    }

    pub fn monic(&self, ord: MonomialOrder) -> MultiPoly {
        match self.leading_term(ord) {
            None => self.clone(),
            Some((_, c)) => self.scale(fp::inv(c, self.ring.p())),
        }
    }

    /// Apply a variable permutation: position `i` of the new ring reads
    /// variable `perm[i]` of the old one.
    pub fn permute_vars(&self, new_ring: &PolyRing, perm: &[usize]) -> MultiPoly {
        MultiPoly {
            ring: new_ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.permute(perm), c))
                .collect(),
        }
    }

    /// True when only the variables in `allowed` occur.
    pub fn supported_on(&self, allowed: &[usize]) -> bool {
        self.terms.keys().all(|m| {
            m.exps()
                .iter()
                .enumerate()
                .all(|(i, &e)| e == 0 || allowed.contains(&i))
        })
    }

    /// Terms sorted descending in the display order.
    pub fn sorted_terms(&self) -> Vec<(Monomial, u64)> {
        let mut v: Vec<(Monomial, u64)> = self
            .terms
            .iter()
            .map(|(m, &c)| (m.clone(), c))
            .collect();
        v.sort_by(|(a, _), (b, _)| DISPLAY_ORDER.cmp(b, a));
        v
    }
}

/// q = p^e with overflow checking.
pub fn checked_q(p: u64, e: u32) -> Result<u128> {
    let mut q: u128 = 1;
    for _ in 0..e {
        q = q.checked_mul(p as u128).ok_or(Error::ExponentOverflow)?;
    }
    Ok(q)
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.arith(rhs, ArithOp::Add).expect("ring mismatch in +")
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.arith(rhs, ArithOp::Sub).expect("ring mismatch in -")
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.arith(rhs, ArithOp::Mul).expect("ring mismatch in *")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let vars = self.ring.vars();
        let mut first = true;
        for (m, c) in self.sorted_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if c != 1 || m.is_one() {
                factors.push(format!("{c}"));
            }
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 1 {
                    factors.push(vars[i].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", vars[i], e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, vars: &[&str]) -> PolyRing {
        PolyRing::new(p, vars).unwrap()
    }

    #[test]
    fn char2_cancellation() {
        let r = ring(2, &["x", "y"]);
        let f = &r.var("x").unwrap() + &r.var("y").unwrap();
        assert!((&f + &f).is_zero());
    }

    #[test]
    fn monomial_product() {
        let r = ring(3, &["x"]);
        let x = r.var("x").unwrap();
        let x2 = &x * &x;
        assert_eq!(x2, x.pow(2).unwrap());
        assert_eq!(format!("{x2}"), "x^2");
    }

    #[test]
    fn freshmans_dream_f3() {
        // (x+y)^3 over F_3 expands, via the binomial oracle, to x^3 + y^3
        let r = ring(3, &["x", "y"]);
        let f = &r.var("x").unwrap() + &r.var("y").unwrap();
        let cube = f.pow(3).unwrap();
        // brute-force binomial sum oracle
        let mut expected = r.zero();
        let mut binom: u128 = 1;
        for k in 0..=3u128 {
            let c = (binom % 3) as i128;
            expected = &expected
                + &MultiPoly::from_terms(&r, [(Monomial::new(vec![3 - k, k]), c)]);
            binom = binom * (3 - k) / (k + 1);
        }
        assert_eq!(cube, expected);
        assert_eq!(cube, f.frobenius_pow(1).unwrap());
    }

    #[test]
    fn frobenius_examples() {
        let r2 = ring(2, &["x", "y"]);
        let f = &r2.var("x").unwrap() + &r2.var("y").unwrap();
        assert_eq!(format!("{}", f.frobenius_pow(1).unwrap()), "x^2 + y^2");

        let r3 = ring(3, &["x"]);
        let g = r3.var("x").unwrap().scale(2);
        // 2^3 = 2 mod 3
        assert_eq!(format!("{}", g.frobenius_pow(1).unwrap()), "2*x^3");

        let h = &(&r2.var("x").unwrap() + &r2.var("y").unwrap()) + &r2.one();
        // repeated-squaring oracle: a^(p^e) computed by four successive squarings
        let mut oracle = h.clone();
        for _ in 0..2 {
            oracle = &oracle * &oracle;
        }
        assert_eq!(h.frobenius_pow(2).unwrap(), oracle);
        assert_eq!(format!("{}", h.frobenius_pow(2).unwrap()), "x^4 + y^4 + 1");
    }

    #[test]
    fn eval_substitution() {
        let src = ring(5, &["x", "y"]);
        let tgt = ring(5, &["t"]);
        let t = tgt.var("t").unwrap();
        let f = &src.var("y").unwrap().pow(2).unwrap() - &src.var("x").unwrap().pow(3).unwrap();
        let img = f
            .eval(&tgt, &[t.pow(2).unwrap(), t.pow(3).unwrap()])
            .unwrap();
        assert!(img.is_zero());
    }

    #[test]
    fn display_canonical() {
        let r = ring(7, &["x", "y"]);
        let f = MultiPoly::from_terms(
            &r,
            [
                (Monomial::new(vec![0, 0]), 3),
                (Monomial::new(vec![1, 1]), 1),
                (Monomial::new(vec![0, 2]), 6),
            ],
        );
        assert_eq!(format!("{f}"), "x*y + 6*y^2 + 3");
    }

    #[test]
    fn signature_mismatch_rejected() {
        let a = ring(3, &["x"]).one();
        let b = ring(5, &["x"]).one();
        assert!(a.arith(&b, ArithOp::Add).is_err());
    }

    #[test]
    fn zero_variable_ring() {
        let r = ring(3, &[] as &[&str]);
        let two = r.constant(2);
        assert_eq!(&two * &two, r.one());
        assert_eq!(format!("{two}"), "2");
    }

    #[test]
    fn box_monomials_count() {
        let r = ring(3, &["x", "y"]);
        assert_eq!(r.box_monomials(3).len(), 9);
        let r1 = ring(2, &["x", "y", "z"]);
        assert_eq!(r1.box_monomials(2).len(), 8);
    }
}
