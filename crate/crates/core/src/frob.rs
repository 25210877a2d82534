//! The p^{-e}-linear calculus: bracket powers, the canonical generator Φ of
//! Hom(F^e_* S, S), maps φ_c = Φ^e(c·−) on presented rings, well-definedness,
//! surjectivity (Fedder-style at a point and via the global image ideal),
//! compatible ideals, and composition.

use crate::error::{Error, Result};
use crate::groebner::{GbConfig, Ideal};
use crate::poly::{checked_q, ArithOp, Monomial, MultiPoly, PolyRing};
use crate::ring::{PresentedRing, ProductRing, Tuple};
use rand::Rng;

/// I^[p^e]: the ideal generated by the p^e-th powers of the generators.
/// Independent of the generating set (property-tested).
pub fn bracket_power(ideal: &Ideal, e: u32) -> Result<Ideal> {
    if e == 0 {
        return Err(Error::Invalid("bracket power requires e >= 1".into()));
    }
    let gens = ideal
        .gens()
        .iter()
        .map(|g| g.frobenius_pow(e))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(ideal.ring(), gens)
}

/// Evaluate Φ^e(c·f), where Φ^e is the F^e_* S-module generator of
/// Hom_S(F^e_* S, S): write each exponent vector of c·f as q·b + r with all
/// r_i < q and keep exactly the terms with r = (q−1, …, q−1), sending them to
/// the monomial with exponent b (coefficients are Frobenius-fixed over F_p).
pub fn phi_eval(c: &MultiPoly, e: u32, f: &MultiPoly) -> Result<MultiPoly> {
    let ring = c.ring().clone();
    let q = checked_q(ring.p(), e)?;
    let product = c.arith(f, ArithOp::Mul)?;
    let mut out = ring.zero();
    for (m, coeff) in product.terms() {
        let mut b = Vec::with_capacity(m.len());
        let mut keep = true;
        for &exp in m.exps() {
            if exp % q == q - 1 {
                b.push(exp / q);
            } else {
                keep = false;
                break;
            }
        }
        if keep {
            let t = ring.monomial(Monomial::new(b), coeff as i128);
            out = out.arith(&t, ArithOp::Add)?;
        }
    }
    Ok(out)
}

/// A p^{-e}-linear map on a presented ring or product of them, stored as the
/// exponent e together with one ambient premultiplier per component; the map
/// acts componentwise as f ↦ Φ^e(c·f).
#[derive(Clone, PartialEq, Debug)]
pub struct PeMap {
    ring: ProductRing,
    e: u32,
    premult: Tuple,
}

impl PeMap {
    pub fn new(ring: ProductRing, e: u32, premult: Tuple) -> Result<PeMap> {
        if e == 0 {
            return Err(Error::Invalid("a p^{-e}-linear map needs e >= 1".into()));
        }
        ring.check_tuple(&premult)?;
        checked_q(ring.p(), e)?;
        Ok(PeMap { ring, e, premult })
    }

    pub fn on_quotient(ring: PresentedRing, e: u32, c: MultiPoly) -> Result<PeMap> {
        PeMap::new(ProductRing::single(ring), e, Tuple::new(vec![c]))
    }

    pub fn ring(&self) -> &ProductRing {
        &self.ring
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u128 {
        checked_q(self.ring.p(), self.e).expect("validated at construction")
    }

    pub fn premult(&self) -> &Tuple {
        &self.premult
    }

    /// Apply the map to an element, componentwise, reducing to normal form.
    pub fn apply(&self, f: &Tuple) -> Result<Tuple> {
        self.ring.check_tuple(f)?;
        let parts = self
            .premult
            .parts()
            .iter()
            .zip(f.parts())
            .zip(self.ring.components())
            .map(|((c, x), comp)| comp.nf(&phi_eval(c, self.e, x)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tuple::new(parts))
    }

    /// Well-definedness on the quotient: per component, c ∈ (I^[q] : I).
    pub fn is_well_defined(&self) -> Result<bool> {
        for (c, comp) in self.premult.parts().iter().zip(self.ring.components()) {
            if comp.is_free() {
                continue;
            }
            let colon = bracket_power(comp.defining(), self.e)?.colon(comp.defining())?;
            if !colon.contains(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The image of the map as an ideal of each component, reported via
    /// ambient representatives: generated by Φ^e(c·x^a) over the truncated
    /// monomial basis together with the defining ideal.
    pub fn image_ideal(&self) -> Result<Vec<Ideal>> {
        let q = self.q();
        let mut out = Vec::with_capacity(self.ring.len());
        for (c, comp) in self.premult.parts().iter().zip(self.ring.components()) {
            let mut gens: Vec<MultiPoly> = comp.defining().gens().to_vec();
            for m in comp.ambient().box_monomials(q) {
                let basis_mono = comp.ambient().monomial(m, 1);
                let v = phi_eval(c, self.e, &basis_mono)?;
                if !v.is_zero() {
                    gens.push(v);
                }
            }
            out.push(Ideal::new(comp.ambient(), gens)?);
        }
        Ok(out)
    }

    /// Global surjectivity: the image ideal is the unit ideal in every
    /// component's quotient.
    pub fn is_surjective_global(&self) -> Result<bool> {
        for img in self.image_ideal()? {
            if !img.is_unit()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Fedder-style surjectivity at a maximal ideal of one component:
    /// surjective at m iff c ∉ m^[q].  The ideal must contain the component's
    /// defining ideal and be certified maximal (a rational point).
    pub fn is_surjective_at(&self, component: usize, max_ideal: &Ideal) -> Result<bool> {
        let comp = self
            .ring
            .components()
            .get(component)
            .ok_or_else(|| Error::Invalid("component index out of range".into()))?;
        if max_ideal.ring() != comp.ambient() {
            return Err(Error::SignatureMismatch(
                "point ideal outside the component's ambient ring".into(),
            ));
        }
        if !max_ideal.contains_ideal(comp.defining())? {
            return Err(Error::Invalid(
                "point ideal does not contain the defining ideal".into(),
            ));
        }
        certify_rational_point(max_ideal)?;
        let bracket = bracket_power(max_ideal, self.e)?;
        Ok(!bracket.contains(self.premult.part(component))?)
    }

    /// Surjectivity at the origin of every component; the default point of
    /// interest for corpus verdicts.
    pub fn is_surjective_at_origins(&self) -> Result<bool> {
        for (i, comp) in self.ring.components().iter().enumerate() {
            if !self.is_surjective_at(i, &comp.origin_ideal())? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Compatibility with an ambient ideal J ⊇ I per component: φ(F^e_* J) ⊆ J.
    /// Two routes are computed and cross-checked: evaluation on J-multiples of
    /// the truncated basis, and the colon test c ∈ (J^[q] : J).
    pub fn is_compatible(&self, j: &[Ideal]) -> Result<bool> {
        if j.len() != self.ring.len() {
            return Err(Error::SignatureMismatch(
                "one compatible ideal per component required".into(),
            ));
        }
        let q = self.q();
        let mut verdict = true;
        for ((c, comp), jj) in self
            .premult
            .parts()
            .iter()
            .zip(self.ring.components())
            .zip(j)
        {
            if jj.ring() != comp.ambient() {
                return Err(Error::SignatureMismatch(
                    "compatible ideal outside ambient ring".into(),
                ));
            }
            if !jj.contains_ideal(comp.defining())? {
                return Err(Error::Invalid(
                    "compatibility requires J to contain the defining ideal".into(),
                ));
            }
            // evaluation route
            let mut eval_ok = true;
            'outer: for g in jj.gens() {
                for m in comp.ambient().box_monomials(q) {
                    let probe = g.mul_monomial(&m, 1)?;
                    let v = phi_eval(c, self.e, &probe)?;
                    if !jj.contains(&v)? {
                        eval_ok = false;
                        break 'outer;
                    }
                }
            }
            // colon route
            let colon = bracket_power(jj, self.e)?.colon(jj)?;
            let colon_ok = colon.contains(c)?;
            if eval_ok != colon_ok {
                return Err(Error::Internal(format!(
                    "compatibility routes disagree on component {:?}: evaluation {} vs colon {}",
                    jj, eval_ok, colon_ok
                )));
            }
            verdict = verdict && eval_ok;
        }
        Ok(verdict)
    }

    /// Composite self ∘ F^{e1}_* other (apply `other` first): the exponent is
    /// e1 + e2 and the premultiplier is c1^(p^{e2})·c2 per component.
    pub fn compose(&self, other: &PeMap) -> Result<PeMap> {
        if self.ring != other.ring {
            return Err(Error::SignatureMismatch(
                "composition of maps on different rings".into(),
            ));
        }
        let e = self.e + other.e;
        let parts = self
            .premult
            .parts()
            .iter()
            .zip(other.premult.parts())
            .map(|(c1, c2)| c1.frobenius_pow(other.e)?.arith(c2, ArithOp::Mul))
            .collect::<Result<Vec<_>>>()?;
        PeMap::new(self.ring.clone(), e, Tuple::new(parts))
    }

    /// d-fold self-composition; the premultiplier picks up the exponent
    /// 1 + q + … + q^{d−1}.
    pub fn self_power(&self, d: u32) -> Result<PeMap> {
        if d == 0 {
            return Err(Error::Invalid("self_power requires d >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..d {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// The same (e, c) data read over the larger defining ideal I + J;
    /// requires compatibility so that evaluation commutes with the quotient.
    pub fn induced_quotient(&self, j: &[Ideal]) -> Result<PeMap> {
        if !self.is_compatible(j)? {
            return Err(Error::Invalid(
                "map is not compatible with the ideal; no induced quotient map".into(),
            ));
        }
        let comps = self
            .ring
            .components()
            .iter()
            .zip(j)
            .map(|(comp, jj)| {
                PresentedRing::new(comp.ambient().clone(), comp.defining().sum(jj)?)
            })
            .collect::<Result<Vec<_>>>()?;
        PeMap::new(
            ProductRing::new(comps)?,
            self.e,
            self.premult.clone(),
        )
    }
}

/// Certify that an ideal is maximal by checking its reduced lex basis has the
/// rational-point shape {x_1 − a_1, …, x_n − a_n}.  Desk-scale surjectivity
/// verdicts are all taken at rational points.
pub fn certify_rational_point(ideal: &Ideal) -> Result<()> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let gb = ideal.gb(crate::order::MonomialOrder::Lex)?;
    if gb.len() != n {
        return Err(Error::Invalid(format!(
            "cannot certify maximality of {:?}: not a rational point",
            ideal
        )));
    }
    let mut seen = vec![false; n];
    for g in gb.iter() {
        let (lm, _) = g.leading_term(crate::order::MonomialOrder::Lex).unwrap();
        let idx = lm
            .exps()
            .iter()
            .position(|&e| e == 1)
            .filter(|_| lm.deg() == 1);
        match idx {
            Some(i) if !seen[i] && g.num_terms() <= 2 && g.total_deg() == 1 => {
                seen[i] = true;
            }
            _ => {
                return Err(Error::Invalid(format!(
                    "cannot certify maximality of {:?}: not a rational point",
                    ideal
                )))
            }
        }
    }
    Ok(())
}

/// Draw a random well-defined premultiplier for each component: a random
/// ambient-coefficient combination of the generators of (I^[q] : I).
pub fn random_well_defined<R: Rng>(
    ring: &ProductRing,
    e: u32,
    coeff_degree: u128,
    rng: &mut R,
) -> Result<PeMap> {
    let mut parts = Vec::with_capacity(ring.len());
    for comp in ring.components() {
        let colon = if comp.is_free() {
            Ideal::new(comp.ambient(), vec![comp.ambient().one()])?
        } else {
            bracket_power(comp.defining(), e)?.colon(comp.defining())?
        };
        let basis = colon.gb(crate::order::MonomialOrder::GrevLex)?;
        let mut acc = comp.ambient().zero();
        for g in basis.iter() {
            let coeff = random_poly(comp.ambient(), coeff_degree, rng)?;
            acc = acc.arith(&g.arith(&coeff, ArithOp::Mul)?, ArithOp::Add)?;
        }
        if acc.is_zero() {
            // retry with the plain first generator so trials stay informative
            if let Some(g) = basis.first() {
                acc = g.clone();
            }
        }
        parts.push(acc);
    }
    PeMap::new(ring.clone(), e, Tuple::new(parts))
}

/// A random polynomial with monomials of total degree at most `deg`.
pub fn random_poly<R: Rng>(ring: &PolyRing, deg: u128, rng: &mut R) -> Result<MultiPoly> {
    let monos = ring.monomials_up_to_degree(deg);
    let mut acc = ring.zero();
    for m in monos {
        let c = rng.gen_range(0..ring.p()) as i128;
        if c != 0 && rng.gen_bool(0.6) {
            acc = acc.arith(&ring.monomial(m, c), ArithOp::Add)?;
        }
    }
    Ok(acc)
}

/// Fedder's criterion for the ring itself: R = S/I is F-pure at the rational
/// point m iff (I^[q] : I) ⊄ m^[q].
pub fn ring_is_fpure_at(component: &PresentedRing, e: u32, max_ideal: &Ideal) -> Result<bool> {
    certify_rational_point(max_ideal)?;
    if !max_ideal.contains_ideal(component.defining())? {
        return Err(Error::Invalid(
            "point ideal does not contain the defining ideal".into(),
        ));
    }
    let colon = if component.is_free() {
        Ideal::new(component.ambient(), vec![component.ambient().one()])?
    } else {
        bracket_power(component.defining(), e)?.colon(component.defining())?
    };
    let bracket = bracket_power(max_ideal, e)?;
    for g in colon.gb(crate::order::MonomialOrder::GrevLex)?.iter() {
        if !bracket.contains(g)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Solve for a premultiplier on a free polynomial ring that realizes the
/// prescribed values on the truncated basis: c = Σ_b v_b^q · x^{(q−1,…)−b}.
pub fn premult_from_values(
    ring: &PolyRing,
    e: u32,
    values: &[(Monomial, MultiPoly)],
) -> Result<MultiPoly> {
    let q = checked_q(ring.p(), e)?;
    let mut acc = ring.zero();
    let top = Monomial::new(vec![q - 1; ring.nvars()]);
    for (b, v) in values {
        if !b.divides(&top) {
            return Err(Error::Invalid(
                "basis monomial outside the truncated box".into(),
            ));
        }
        let shift = top.div(b);
        let term = v.frobenius_pow(e)?.mul_monomial(&shift, 1)?;
        acc = acc.arith(&term, ArithOp::Add)?;
    }
    Ok(acc)
}

/// q^{d−1} + … + q + 1, the premultiplier exponent of a d-fold composite.
pub fn geometric_exponent(q: u128, d: u32) -> Result<u128> {
    let mut acc: u128 = 0;
    let mut pw: u128 = 1;
    for _ in 0..d {
        acc = acc.checked_add(pw).ok_or(Error::ExponentOverflow)?;
        pw = pw.checked_mul(q).ok_or(Error::ExponentOverflow)?;
    }
    Ok(acc)
}

#[allow(unused)]
fn default_cfg() -> GbConfig {
    GbConfig::default()
}
