//! Presented finite ring extensions, normalizations chief among them:
//! verification of the ring map and the declared conductor, subring
//! membership through a joint tag-variable system, extension of
//! p^{-e}-linear maps by exact linear algebra, and trace maps of monogenic
//! extensions with surjectivity tests.

use crate::error::{Error, Result};
use crate::frob::{bracket_power, phi_eval, PeMap};
use crate::groebner::{fresh_name, normal_form, subalgebra_member, GbConfig, Ideal};
use crate::linalg;
use crate::order::MonomialOrder;
use crate::poly::{ArithOp, Monomial, MultiPoly, PolyRing};
use crate::ring::{PresentedRing, ProductRing, Tuple};

/// A ring map from a presented ring into a product of presented rings, with
/// declared module generators and an optional conductor candidate.  The data
/// is user-supplied and verified, never computed from scratch.
#[derive(Clone, PartialEq, Debug)]
pub struct FiniteExtension {
    source: PresentedRing,
    target: ProductRing,
    var_images: Vec<Tuple>,
    module_gens: Vec<Tuple>,
    conductor: Option<Vec<Ideal>>,
    is_normalization: bool,
}

impl FiniteExtension {
    pub fn new(
        source: PresentedRing,
        target: ProductRing,
        var_images: Vec<Tuple>,
    ) -> Result<FiniteExtension> {
        if source.p() != target.p() {
            return Err(Error::SignatureMismatch(
                "characteristic mismatch between source and target".into(),
            ));
        }
        if var_images.len() != source.ambient().nvars() {
            return Err(Error::Invalid(format!(
                "expected {} variable images, got {}",
                source.ambient().nvars(),
                var_images.len()
            )));
        }
        for t in &var_images {
            target.check_tuple(t)?;
        }
        Ok(FiniteExtension {
            source,
            target,
            var_images,
            module_gens: Vec::new(),
            conductor: None,
            is_normalization: false,
        })
    }

    pub fn set_module_gens(&mut self, gens: Vec<Tuple>) -> Result<()> {
        for t in &gens {
            self.target.check_tuple(t)?;
        }
        self.module_gens = gens;
        Ok(())
    }

    pub fn set_conductor(&mut self, per_component: Vec<Ideal>, is_normalization: bool) -> Result<()> {
        if per_component.len() != self.target.len() {
            return Err(Error::Invalid(
                "one conductor ideal per target component required".into(),
            ));
        }
        for (ideal, comp) in per_component.iter().zip(self.target.components()) {
            if ideal.ring() != comp.ambient() {
                return Err(Error::SignatureMismatch(
                    "conductor ideal outside its component's ambient ring".into(),
                ));
            }
        }
        self.conductor = Some(per_component);
        self.is_normalization = is_normalization;
        Ok(())
    }

    pub fn source(&self) -> &PresentedRing {
        &self.source
    }

    pub fn target(&self) -> &ProductRing {
        &self.target
    }

    pub fn var_images(&self) -> &[Tuple] {
        &self.var_images
    }

    pub fn module_gens(&self) -> &[Tuple] {
        &self.module_gens
    }

    pub fn conductor(&self) -> Option<&[Ideal]> {
        self.conductor.as_deref()
    }

    pub fn is_normalization(&self) -> bool {
        self.is_normalization
    }

    /// Image of a source representative in component `j`, in normal form.
    pub fn image_component(&self, f: &MultiPoly, j: usize) -> Result<MultiPoly> {
        let comp = &self.target.components()[j];
        let images: Vec<MultiPoly> = self
            .var_images
            .iter()
            .map(|t| t.part(j).clone())
            .collect();
        comp.nf(&f.eval(comp.ambient(), &images)?)
    }

    /// Image of a source representative as a tuple.
    pub fn image_of(&self, f: &MultiPoly) -> Result<Tuple> {
        let parts = (0..self.target.len())
            .map(|j| self.image_component(f, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tuple::new(parts))
    }

    /// True iff every source relation maps to zero in every component.
    pub fn verify_ring_map(&self) -> Result<bool> {
        for g in self.source.defining().gens() {
            for j in 0..self.target.len() {
                if !self.image_component(g, j)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Membership of a target element in the image subring, solved by one
    /// joint tag-variable system across components: the product ring is
    /// presented with orthogonal idempotents and subalgebra membership is
    /// decided by an elimination-order normal form landing in the tag block.
    pub fn subring_member(&self, h: &Tuple) -> Result<Option<MultiPoly>> {
        self.target.check_tuple(h)?;
        let pres = ProductPresentation::build(&self.target)?;
        let images: Vec<MultiPoly> = self
            .var_images
            .iter()
            .map(|t| pres.embed(t))
            .collect::<Result<_>>()?;
        subalgebra_member(
            &pres.embed(h)?,
            &images,
            &pres.relations,
            self.source.ambient(),
            &GbConfig::default(),
        )
    }

    /// Verify the declared conductor: every product of a conductor generator
    /// with a module generator has a source preimage (so the conductor, an
    /// ideal of the target by construction, is contained in the image of the
    /// source and is an ideal there too).  Requires 1 among the module
    /// generators.  Maximality is not certified here; see `conductor_sweep`.
    pub fn verify_conductor(&self) -> Result<bool> {
        let conductor = self
            .conductor
            .as_ref()
            .ok_or_else(|| Error::Invalid("no conductor declared".into()))?;
        let one = self.target.one();
        if !self
            .module_gens
            .iter()
            .any(|g| self.target.eq_elems(g, &one).unwrap_or(false))
        {
            return Err(Error::Verification(
                "module generators must contain 1".into(),
            ));
        }
        for (j, ideal) in conductor.iter().enumerate() {
            for gen in ideal.gens() {
                // embed the pure generator (0, …, gen, …, 0)
                let mut parts = self.target.zero().parts().to_vec();
                parts[j] = gen.clone();
                let pure = Tuple::new(parts);
                for mg in &self.module_gens {
                    let prod = self.target.nf(&pure.arith(mg, ArithOp::Mul)?)?;
                    if self.subring_member(&prod)?.is_none() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Bounded brute-force sweep: monomials of degree ≤ `max_deg` on each
    /// component that conduct (all products with module generators land in
    /// the image) but lie outside the candidate.  Non-certifying; an empty
    /// return merely says the sweep found nothing larger.
    pub fn conductor_sweep(&self, max_deg: u128) -> Result<Vec<(usize, MultiPoly)>> {
        let conductor = self
            .conductor
            .as_ref()
            .ok_or_else(|| Error::Invalid("no conductor declared".into()))?;
        let mut found = Vec::new();
        for (j, comp) in self.target.components().iter().enumerate() {
            for m in comp.ambient().monomials_up_to_degree(max_deg) {
                let cand = comp.ambient().monomial(m, 1);
                if conductor[j].contains(&cand)? {
                    continue;
                }
                let mut parts = self.target.zero().parts().to_vec();
                parts[j] = cand.clone();
                let pure = Tuple::new(parts);
                let conducts = self
                    .module_gens
                    .iter()
                    .map(|mg| {
                        let prod = self.target.nf(&pure.arith(mg, ArithOp::Mul)?)?;
                        Ok(self.subring_member(&prod)?.is_some())
                    })
                    .collect::<Result<Vec<bool>>>()?
                    .into_iter()
                    .all(|b| b);
                if conducts {
                    found.push((j, cand));
                }
            }
        }
        Ok(found)
    }

    /// Contraction of an ideal of one target component to the source, via
    /// the graph ideal and elimination: {g : image_j(g) ∈ Q + I_j}.
    pub fn contract_ideal(&self, j: usize, q_ideal: &Ideal) -> Result<Ideal> {
        let comp = &self.target.components()[j];
        if q_ideal.ring() != comp.ambient() {
            return Err(Error::SignatureMismatch(
                "ideal outside the component's ambient ring".into(),
            ));
        }
        let mut vars: Vec<String> = comp.ambient().vars().to_vec();
        let mut src_names = Vec::new();
        for v in self.source.ambient().vars() {
            let name = fresh_name(v, &vars);
            vars.push(name.clone());
            src_names.push(name);
        }
        let big = PolyRing::new(comp.p(), &vars)?;
        let mut gens: Vec<MultiPoly> = Vec::new();
        for g in comp.defining().gens() {
            gens.push(g.rename_into(&big)?);
        }
        for g in q_ideal.gens() {
            gens.push(g.rename_into(&big)?);
        }
        for (i, name) in src_names.iter().enumerate() {
            let xi = big.var(name)?;
            let fi = self.var_images[i].part(j).rename_into(&big)?;
            gens.push(&xi - &fi);
        }
        let graph = Ideal::new(&big, gens)?;
        let keep: Vec<usize> = (comp.ambient().nvars()..big.nvars()).collect();
        let eliminated = graph.eliminate(&keep)?;
        let mut out = Vec::new();
        let src_ring = self.source.ambient();
        for g in eliminated.gens() {
            // rename back by position into the source ring
            let images: Vec<MultiPoly> = (0..big.nvars())
                .map(|i| {
                    if i < comp.ambient().nvars() {
                        src_ring.zero()
                    } else {
                        src_ring.var_by_index(i - comp.ambient().nvars())
                    }
                })
                .collect();
            out.push(g.eval(src_ring, &images)?);
        }
        Ideal::new(src_ring, out)
    }

    /// The default search bound for extension premultipliers:
    /// deg(c)·(max image degree) + 2q.
    pub fn default_extension_bound(&self, m: &PeMap) -> Result<u128> {
        let c = m.premult().part(0);
        let img_deg = self
            .var_images
            .iter()
            .flat_map(|t| t.parts().iter().map(|f| f.total_deg()))
            .max()
            .unwrap_or(1)
            .max(1);
        c.total_deg()
            .checked_mul(img_deg)
            .and_then(|d| d.checked_add(2 * m.q()))
            .ok_or(Error::ExponentOverflow)
    }

    /// Extend a p^{-e}-linear map on the source along this extension.
    ///
    /// Searches for one target premultiplier per component, supported on
    /// monomials of degree ≤ bound, such that the candidate is well defined
    /// on each component and the restriction identity
    /// Φ^e(c'·η(x^a)) = η(Φ^e(c·x^a)) holds for every source basis monomial
    /// x^a with exponents < q.  The conditions are linear over F_p.
    ///
    /// Errors: `NotExtendable` for a general extension whose system is
    /// inconsistent at the bound; `BoundTooSmall` when the extension is
    /// normalization-flagged (existence is guaranteed, so inconsistency can
    /// only mean the bound was insufficient); `NonUniqueExtension` when a
    /// normalization-flagged search finds essentially distinct solutions.
    pub fn extend_pe_map(&self, m: &PeMap, bound_override: Option<u128>) -> Result<PeMap> {
        let src = m.ring().sole()?;
        if src != &self.source {
            return Err(Error::SignatureMismatch(
                "map does not live on the source of this extension".into(),
            ));
        }
        if !m.is_well_defined()? {
            return Err(Error::Invalid(
                "cannot extend a map that is not well defined on the source".into(),
            ));
        }
        let e = m.e();
        let q = m.q();
        let c = m.premult().part(0);
        let bound = match bound_override {
            Some(b) => b,
            None => self.default_extension_bound(m)?,
        };

        // unknowns: one per (component, monomial of degree <= bound)
        let mut unknowns: Vec<(usize, Monomial)> = Vec::new();
        let mut offsets = Vec::with_capacity(self.target.len());
        for (j, comp) in self.target.components().iter().enumerate() {
            offsets.push(unknowns.len());
            for mm in comp.ambient().monomials_up_to_degree(bound) {
                unknowns.push((j, mm));
            }
        }
        let ncols = unknowns.len();
        let p = self.target.p();

        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut rhs: Vec<u64> = Vec::new();
        let mut push_group = |contribs: &[(usize, MultiPoly)], rhs_poly: &MultiPoly| {
            let mut monos: std::collections::BTreeSet<Monomial> = rhs_poly
                .terms()
                .map(|(mm, _)| mm.clone())
                .collect();
            for (_, f) in contribs {
                monos.extend(f.terms().map(|(mm, _)| mm.clone()));
            }
            for mono in monos {
                let mut row = vec![0u64; ncols];
                for (idx, f) in contribs {
                    row[*idx] = f.coeff(&mono);
                }
                rows.push(row);
                rhs.push(rhs_poly.coeff(&mono));
            }
        };

        let colon_bases: Vec<Option<Ideal>> = self
            .target
            .components()
            .iter()
            .map(|comp| -> Result<Option<Ideal>> {
                if comp.is_free() {
                    Ok(None)
                } else {
                    Ok(Some(
                        bracket_power(comp.defining(), e)?.colon(comp.defining())?,
                    ))
                }
            })
            .collect::<Result<_>>()?;

        // (a) well-definedness: the normal form of each candidate against the
        // colon ideal vanishes; linear in its coefficients
        for (j, comp) in self.target.components().iter().enumerate() {
            let Some(colon) = &colon_bases[j] else { continue };
            let mut contribs = Vec::new();
            for (idx, (jj, mm)) in unknowns.iter().enumerate() {
                if *jj != j {
                    continue;
                }
                let nf = colon.normal_form(&comp.ambient().monomial(mm.clone(), 1), MonomialOrder::GrevLex)?;
                if !nf.is_zero() {
                    contribs.push((idx, nf));
                }
            }
            let zero = comp.ambient().zero();
            push_group(&contribs, &zero);
        }

        // (b) restriction identity on the truncated source basis
        let box_monos = self.source.ambient().box_monomials(q);
        for a in &box_monos {
            let basis_mono = self.source.ambient().monomial(a.clone(), 1);
            let phi_val = phi_eval(c, e, &basis_mono)?;
            for (j, comp) in self.target.components().iter().enumerate() {
                let img_basis = self.image_component(&basis_mono, j)?;
                let rhs_poly = self.image_component(&phi_val, j)?;
                let mut contribs = Vec::new();
                for (idx, (jj, mm)) in unknowns.iter().enumerate() {
                    if *jj != j {
                        continue;
                    }
                    let mono_poly = comp.ambient().monomial(mm.clone(), 1);
                    let v = comp.nf(&phi_eval(&mono_poly, e, &img_basis)?)?;
                    if !v.is_zero() {
                        contribs.push((idx, v));
                    }
                }
                push_group(&contribs, &rhs_poly);
            }
        }

        let solved = linalg::solve(rows, rhs, ncols, p);
        let Some(sol) = solved else {
            return if self.is_normalization {
                Err(Error::BoundTooSmall { bound })
            } else {
                Err(Error::NotExtendable(format!(
                    "restriction system inconsistent at degree bound {bound}"
                )))
            };
        };

        let build = |vector: &[u64]| -> Result<Tuple> {
            let parts = self
                .target
                .components()
                .iter()
                .enumerate()
                .map(|(j, comp)| {
                    let mut acc = comp.ambient().zero();
                    for (idx, (jj, mm)) in unknowns.iter().enumerate() {
                        if *jj == j && vector[idx] != 0 {
                            let t = comp.ambient().monomial(mm.clone(), vector[idx] as i128);
                            acc = acc.arith(&t, ArithOp::Add)?;
                        }
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Tuple::new(parts))
        };
        let premult = build(&sol.particular)?;
        let _ = offsets;

        // uniqueness modulo premultipliers inducing the zero map: every
        // homogeneous solution must lie componentwise in I^[q]
        if self.is_normalization {
            for null in &sol.nullspace {
                let nt = build(null)?;
                for (j, comp) in self.target.components().iter().enumerate() {
                    let in_zero_maps = if comp.is_free() {
                        nt.part(j).is_zero()
                    } else {
                        bracket_power(comp.defining(), e)?.contains(nt.part(j))?
                    };
                    if !in_zero_maps {
                        return Err(Error::NonUniqueExtension(format!(
                            "homogeneous premultiplier {} on component {j} does not induce the zero map",
                            nt.part(j)
                        )));
                    }
                }
            }
        }

        let extended = PeMap::new(self.target.clone(), e, premult)?;
        // independent re-verification of the defining identity
        if !extended.is_well_defined()? {
            return Err(Error::Internal(
                "extension candidate is not well defined".into(),
            ));
        }
        for a in &box_monos {
            let basis_mono = self.source.ambient().monomial(a.clone(), 1);
            let lhs = extended.apply(&self.image_of(&basis_mono)?)?;
            let rhs = self
                .target
                .nf(&self.image_of(&phi_eval(c, e, &basis_mono)?)?)?;
            if lhs != rhs {
                return Err(Error::Internal(format!(
                    "restriction identity fails on basis monomial {basis_mono}"
                )));
            }
        }
        Ok(extended)
    }
}

/// A presentation of a product ring as one quotient, using orthogonal
/// idempotents: variables of every component (renamed apart) together with
/// one idempotent per component, relations ε_iε_j (i≠j), Σε − 1,
/// v·(1−ε_j) for each variable v of component j, and the component ideals.
pub struct ProductPresentation {
    pub ring: PolyRing,
    pub relations: Ideal,
    /// per component, the position of each of its variables in `ring`
    pub var_positions: Vec<Vec<usize>>,
    /// positions of the idempotents (empty for a single component)
    pub eps_positions: Vec<usize>,
}

impl ProductPresentation {
    pub fn build(target: &ProductRing) -> Result<ProductPresentation> {
        if target.len() == 1 {
            let comp = &target.components()[0];
            return Ok(ProductPresentation {
                ring: comp.ambient().clone(),
                relations: comp.defining().clone(),
                var_positions: vec![(0..comp.ambient().nvars()).collect()],
                eps_positions: Vec::new(),
            });
        }
        let p = target.p();
        let mut vars: Vec<String> = Vec::new();
        let mut var_positions = Vec::new();
        for comp in target.components() {
            let mut positions = Vec::new();
            for v in comp.ambient().vars() {
                let name = fresh_name(v, &vars);
                positions.push(vars.len());
                vars.push(name);
            }
            var_positions.push(positions);
        }
        let mut eps_positions = Vec::new();
        for j in 0..target.len() {
            let name = fresh_name(&format!("e{j}"), &vars);
            eps_positions.push(vars.len());
            vars.push(name);
        }
        let ring = PolyRing::new(p, &vars)?;
        let mut gens: Vec<MultiPoly> = Vec::new();
        for i in 0..target.len() {
            for j in i + 1..target.len() {
                gens.push(
                    &ring.var_by_index(eps_positions[i]) * &ring.var_by_index(eps_positions[j]),
                );
            }
        }
        let mut sum = ring.zero();
        for &epos in &eps_positions {
            sum = &sum + &ring.var_by_index(epos);
        }
        gens.push(&sum - &ring.one());
        for (j, comp) in target.components().iter().enumerate() {
            let eps = ring.var_by_index(eps_positions[j]);
            let one_minus = &ring.one() - &eps;
            for (i, _) in comp.ambient().vars().iter().enumerate() {
                gens.push(&ring.var_by_index(var_positions[j][i]) * &one_minus);
            }
            for g in comp.defining().gens() {
                gens.push(Self::lift_into(g, &ring, &var_positions[j])?);
            }
        }
        let relations = Ideal::new(&ring, gens)?;
        Ok(ProductPresentation {
            ring,
            relations,
            var_positions,
            eps_positions,
        })
    }

    fn lift_into(f: &MultiPoly, ring: &PolyRing, positions: &[usize]) -> Result<MultiPoly> {
        let images: Vec<MultiPoly> = positions.iter().map(|&i| ring.var_by_index(i)).collect();
        f.eval(ring, &images)
    }

    /// Σ_j t_j·ε_j, the element of the presentation matching a tuple.
    pub fn embed(&self, t: &Tuple) -> Result<MultiPoly> {
        if self.eps_positions.is_empty() {
            return Ok(t.part(0).clone());
        }
        let mut acc = self.ring.zero();
        for (j, part) in t.parts().iter().enumerate() {
            let lifted = Self::lift_into(part, &self.ring, &self.var_positions[j])?;
            let eps = self.ring.var_by_index(self.eps_positions[j]);
            acc = &acc + &(&lifted * &eps);
        }
        Ok(acc)
    }
}

/// A monogenic monic extension base[T]/(g) of a presented ring; elements are
/// coefficient vectors on the basis 1, T, …, T^{d−1}.
#[derive(Clone, PartialEq, Debug)]
pub struct MonogenicExt {
    base: PresentedRing,
    gen_name: String,
    /// coefficients c_0, …, c_{d−1} of the monic minimal polynomial
    /// T^d + c_{d−1}T^{d−1} + … + c_0
    minpoly_tail: Vec<MultiPoly>,
}

pub type MonoElt = Vec<MultiPoly>;

impl MonogenicExt {
    pub fn new(
        base: PresentedRing,
        gen_name: &str,
        minpoly_tail: Vec<MultiPoly>,
    ) -> Result<MonogenicExt> {
        if minpoly_tail.is_empty() {
            return Err(Error::Invalid("minimal polynomial must have degree >= 1".into()));
        }
        for cfc in &minpoly_tail {
            if cfc.ring() != base.ambient() {
                return Err(Error::SignatureMismatch(
                    "minimal polynomial coefficient outside the base ring".into(),
                ));
            }
        }
        Ok(MonogenicExt {
            base,
            gen_name: gen_name.to_string(),
            minpoly_tail,
        })
    }

    pub fn base(&self) -> &PresentedRing {
        &self.base
    }

    pub fn gen_name(&self) -> &str {
        &self.gen_name
    }

    pub fn degree(&self) -> usize {
        self.minpoly_tail.len()
    }

    pub fn minpoly_tail(&self) -> &[MultiPoly] {
        &self.minpoly_tail
    }

    pub fn zero_elt(&self) -> MonoElt {
        vec![self.base.ambient().zero(); self.degree()]
    }

    pub fn one_elt(&self) -> MonoElt {
        let mut v = self.zero_elt();
        v[0] = self.base.ambient().one();
        v
    }

    /// T^i as an element (i < d).
    pub fn gen_power(&self, i: usize) -> MonoElt {
        let mut v = self.zero_elt();
        v[i] = self.base.ambient().one();
        v
    }

    pub fn basis(&self) -> Vec<MonoElt> {
        (0..self.degree()).map(|i| self.gen_power(i)).collect()
    }

    fn reduce_raw(&self, mut raw: Vec<MultiPoly>) -> Result<MonoElt> {
        let d = self.degree();
        while raw.len() > d {
            let top = raw.pop().unwrap();
            let k = raw.len(); // the removed term was T^k
            let _ = k;
            if top.is_zero() {
                continue;
            }
            // T^k = T^{k-d} · T^d = −T^{k-d} Σ c_i T^i
            for (i, cfc) in self.minpoly_tail.iter().enumerate() {
                let pos = raw.len() - d + i;
                let sub = top.arith(cfc, ArithOp::Mul)?;
                raw[pos] = raw[pos].arith(&sub, ArithOp::Sub)?;
            }
        }
        while raw.len() < d {
            raw.push(self.base.ambient().zero());
        }
        raw.iter().map(|f| self.base.nf(f)).collect()
    }

    pub fn mul(&self, a: &MonoElt, b: &MonoElt) -> Result<MonoElt> {
        let d = self.degree();
        let mut raw = vec![self.base.ambient().zero(); 2 * d - 1];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                let prod = ai.arith(bj, ArithOp::Mul)?;
                raw[i + j] = raw[i + j].arith(&prod, ArithOp::Add)?;
            }
        }
        self.reduce_raw(raw)
    }

    /// Trace of the multiplication-by-f matrix in the basis 1, …, T^{d−1}.
    pub fn trace_of(&self, f: &MonoElt) -> Result<MultiPoly> {
        if f.len() != self.degree() {
            return Err(Error::Invalid("element arity mismatch".into()));
        }
        let mut tr = self.base.ambient().zero();
        for i in 0..self.degree() {
            let col = self.mul(f, &self.gen_power(i))?;
            tr = tr.arith(&col[i], ArithOp::Add)?;
        }
        self.base.nf(&tr)
    }

    /// The trace map is base-linear, so its image is the base ideal generated
    /// by traces of a module generating set; surjectivity is that ideal being
    /// the unit ideal of the base.
    pub fn is_trace_surjective(&self, generating_set: &[MonoElt]) -> Result<bool> {
        let mut gens: Vec<MultiPoly> = self.base.defining().gens().to_vec();
        for g in generating_set {
            let t = self.trace_of(g)?;
            if !t.is_zero() {
                gens.push(t);
            }
        }
        Ideal::new(self.base.ambient(), gens)?.is_unit()
    }
}

/// A finite product of monogenic extensions over the components of a product
/// ring; the trace of a tuple is the tuple of componentwise traces (summed
/// trace convention for non-domain conductors).
#[derive(Clone, PartialEq, Debug)]
pub struct ProductMonogenicExt {
    comps: Vec<MonogenicExt>,
}

impl ProductMonogenicExt {
    pub fn new(comps: Vec<MonogenicExt>) -> Result<ProductMonogenicExt> {
        if comps.is_empty() {
            return Err(Error::Invalid("empty product extension".into()));
        }
        Ok(ProductMonogenicExt { comps })
    }

    pub fn comps(&self) -> &[MonogenicExt] {
        &self.comps
    }

    pub fn base_ring(&self) -> Result<ProductRing> {
        ProductRing::new(self.comps.iter().map(|c| c.base().clone()).collect())
    }

    pub fn trace_of(&self, elts: &[MonoElt]) -> Result<Tuple> {
        if elts.len() != self.comps.len() {
            return Err(Error::Invalid("one element per component required".into()));
        }
        let parts = self
            .comps
            .iter()
            .zip(elts)
            .map(|(c, f)| c.trace_of(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tuple::new(parts))
    }

    pub fn is_trace_surjective(&self) -> Result<bool> {
        for c in &self.comps {
            if !c.is_trace_surjective(&c.basis())? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Does the trace of the big ring land inside the image of `ext`'s source?
/// Probes run over the declared module generators multiplied by generator
/// powers, both componentwise-pure and diagonal; returns the verdict and the
/// failing probes with their traces.
pub fn trace_lands_in_source(
    tr: &ProductMonogenicExt,
    ext: &FiniteExtension,
) -> Result<(bool, Vec<String>)> {
    let base = tr.base_ring()?;
    if &base != ext.target() {
        return Err(Error::SignatureMismatch(
            "trace base ring differs from the extension target".into(),
        ));
    }
    let k = tr.comps().len();
    let mut probes: Vec<Vec<MonoElt>> = Vec::new();
    // diagonal probes: every multi-index of generator powers
    let degs: Vec<usize> = tr.comps().iter().map(|c| c.degree()).collect();
    let mut index = vec![0usize; k];
    loop {
        probes.push(
            (0..k)
                .map(|j| tr.comps()[j].gen_power(index[j]))
                .collect(),
        );
        let mut i = 0;
        loop {
            if i == k {
                break;
            }
            index[i] += 1;
            if index[i] < degs[i] {
                break;
            }
            index[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    // pure probes: a single component carries a generator power
    for j in 0..k {
        for i in 0..degs[j] {
            let mut elt: Vec<MonoElt> = (0..k).map(|l| tr.comps()[l].zero_elt()).collect();
            elt[j] = tr.comps()[j].gen_power(i);
            probes.push(elt);
        }
    }

    let mut failures = Vec::new();
    for mg in ext.module_gens() {
        for probe in &probes {
            // multiply the probe by the module generator, componentwise
            let scaled: Vec<MonoElt> = (0..k)
                .map(|j| -> Result<MonoElt> {
                    probe[j]
                        .iter()
                        .map(|cf| cf.arith(mg.part(j), ArithOp::Mul))
                        .collect()
                })
                .collect::<Result<_>>()?;
            let t = tr.trace_of(&scaled)?;
            if ext.subring_member(&t)?.is_none() {
                failures.push(format!("Tr = {t} escapes the source"));
            }
        }
    }
    Ok((failures.is_empty(), failures))
}

#[allow(unused)]
fn unused_helpers(f: &MultiPoly, basis: &[MultiPoly]) -> Result<MultiPoly> {
    normal_form(f, basis, MonomialOrder::GrevLex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    fn ring(p: u64, vars: &[&str]) -> PolyRing {
        PolyRing::new(p, vars).unwrap()
    }

    fn pv(r: &PolyRing, name: &str) -> MultiPoly {
        r.var(name).unwrap()
    }

    fn node_extension(p: u64) -> FiniteExtension {
        let amb = ring(p, &["x", "y"]);
        let xy = &pv(&amb, "x") * &pv(&amb, "y");
        let node =
            PresentedRing::new(amb.clone(), Ideal::new(&amb, vec![xy]).unwrap()).unwrap();
        let c1 = PresentedRing::free(ring(p, &["u"]));
        let c2 = PresentedRing::free(ring(p, &["v"]));
        let u = c1.ambient().var("u").unwrap();
        let v = c2.ambient().var("v").unwrap();
        let target = ProductRing::new(vec![c1.clone(), c2.clone()]).unwrap();
        let mut ext = FiniteExtension::new(
            node,
            target.clone(),
            vec![
                Tuple::new(vec![u.clone(), c2.ambient().zero()]),
                Tuple::new(vec![c1.ambient().zero(), v.clone()]),
            ],
        )
        .unwrap();
        ext.set_module_gens(vec![
            target.one(),
            Tuple::new(vec![c1.ambient().one(), c2.ambient().zero()]),
        ])
        .unwrap();
        ext.set_conductor(
            vec![
                Ideal::new(c1.ambient(), vec![u]).unwrap(),
                Ideal::new(c2.ambient(), vec![v]).unwrap(),
            ],
            true,
        )
        .unwrap();
        ext
    }

    fn cusp_extension(p: u64) -> FiniteExtension {
        let amb = ring(p, &["x", "y"]);
        let h = &pv(&amb, "y").pow(2).unwrap() - &pv(&amb, "x").pow(3).unwrap();
        let cusp =
            PresentedRing::new(amb.clone(), Ideal::new(&amb, vec![h]).unwrap()).unwrap();
        let chart = PresentedRing::free(ring(p, &["t"]));
        let t = chart.ambient().var("t").unwrap();
        let target = ProductRing::single(chart.clone());
        let mut ext = FiniteExtension::new(
            cusp,
            target.clone(),
            vec![
                Tuple::new(vec![t.pow(2).unwrap()]),
                Tuple::new(vec![t.pow(3).unwrap()]),
            ],
        )
        .unwrap();
        ext.set_module_gens(vec![target.one(), Tuple::new(vec![t.clone()])])
            .unwrap();
        ext.set_conductor(
            vec![Ideal::new(chart.ambient(), vec![t.pow(2).unwrap()]).unwrap()],
            true,
        )
        .unwrap();
        ext
    }

    #[test]
    fn ring_map_verification() {
        assert!(node_extension(3).verify_ring_map().unwrap());
        assert!(cusp_extension(5).verify_ring_map().unwrap());
        // cusp with y -> t^4 fails
        let amb = ring(5, &["x", "y"]);
        let h = &pv(&amb, "y").pow(2).unwrap() - &pv(&amb, "x").pow(3).unwrap();
        let cusp =
            PresentedRing::new(amb.clone(), Ideal::new(&amb, vec![h]).unwrap()).unwrap();
        let chart = PresentedRing::free(ring(5, &["t"]));
        let t = chart.ambient().var("t").unwrap();
        let bad = FiniteExtension::new(
            cusp,
            ProductRing::single(chart),
            vec![
                Tuple::new(vec![t.pow(2).unwrap()]),
                Tuple::new(vec![t.pow(4).unwrap()]),
            ],
        )
        .unwrap();
        assert!(!bad.verify_ring_map().unwrap());
    }

    #[test]
    fn subring_membership() {
        let cusp = cusp_extension(5);
        let t = cusp.target().components()[0].ambient().var("t").unwrap();
        // t^2 has preimage x
        let pre = cusp
            .subring_member(&Tuple::new(vec![t.pow(2).unwrap()]))
            .unwrap()
            .expect("t^2 is x");
        assert!(cusp
            .source()
            .eq_elems(&pre, &pv(cusp.source().ambient(), "x"))
            .unwrap());
        // t itself is omitted: the cusp is not normal
        assert!(cusp
            .subring_member(&Tuple::new(vec![t.clone()]))
            .unwrap()
            .is_none());

        // node: (u, v) has preimage x + y
        let node = node_extension(3);
        let u = node.target().components()[0].ambient().var("u").unwrap();
        let v = node.target().components()[1].ambient().var("v").unwrap();
        let pre = node
            .subring_member(&Tuple::new(vec![u, v]))
            .unwrap()
            .expect("(u, v) is x + y");
        let expected =
            &pv(node.source().ambient(), "x") + &pv(node.source().ambient(), "y");
        assert!(node.source().eq_elems(&pre, &expected).unwrap());
        // (2, 1) differing constants cannot come from the node
        let two_one = Tuple::new(vec![
            node.target().components()[0].ambient().constant(2),
            node.target().components()[1].ambient().one(),
        ]);
        assert!(node.subring_member(&two_one).unwrap().is_none());
    }

    #[test]
    fn conductor_verification() {
        assert!(node_extension(3).verify_conductor().unwrap());
        assert!(cusp_extension(3).verify_conductor().unwrap());
        // declaring (t) as the cusp conductor fails: t·1 has no preimage
        let mut bad = cusp_extension(3);
        let chart_amb = bad.target().components()[0].ambient().clone();
        let t = chart_amb.var("t").unwrap();
        bad.set_conductor(vec![Ideal::new(&chart_amb, vec![t]).unwrap()], true)
            .unwrap();
        assert!(!bad.verify_conductor().unwrap());
    }

    #[test]
    fn conductor_sweep_finds_nothing_larger() {
        let node = node_extension(3);
        assert!(node.conductor_sweep(4).unwrap().is_empty());
        let cusp = cusp_extension(3);
        assert!(cusp.conductor_sweep(4).unwrap().is_empty());
    }

    #[test]
    fn contraction_of_primes() {
        let node = node_extension(3);
        let c1_amb = node.target().components()[0].ambient().clone();
        let q = Ideal::new(&c1_amb, vec![c1_amb.var("u").unwrap()]).unwrap();
        let contracted = node.contract_ideal(0, &q).unwrap();
        let src = node.source().ambient().clone();
        let expected =
            Ideal::new(&src, vec![src.var("x").unwrap(), src.var("y").unwrap()]).unwrap();
        assert!(contracted.eq_ideal(&expected).unwrap());
    }

    #[test]
    fn extension_of_the_node_generator() {
        let node = node_extension(3);
        let src = node.source().clone();
        let amb = src.ambient().clone();
        let c = &pv(&amb, "x").pow(2).unwrap() * &pv(&amb, "y").pow(2).unwrap();
        let m = PeMap::on_quotient(src, 1, c).unwrap();
        let ext = node.extend_pe_map(&m, None).unwrap();
        // the extension is the per-branch generator (u^2, v^2) up to unit
        let u = node.target().components()[0].ambient().var("u").unwrap();
        let v = node.target().components()[1].ambient().var("v").unwrap();
        assert_eq!(ext.premult().part(0), &u.pow(2).unwrap());
        assert_eq!(ext.premult().part(1), &v.pow(2).unwrap());
        assert!(ext.is_surjective_at_origins().unwrap());
    }

    #[test]
    fn example_nonextendable_map() {
        // F_3[x^2] inside F_3[x]: a map with φ(x^4) not divisible by x cannot
        // extend, while a divisible one does
        let src = PresentedRing::free(ring(3, &["u"]));
        let tgt_comp = PresentedRing::free(ring(3, &["x"]));
        let x = tgt_comp.ambient().var("x").unwrap();
        let target = ProductRing::single(tgt_comp);
        let mut ext = FiniteExtension::new(
            src.clone(),
            target.clone(),
            vec![Tuple::new(vec![x.pow(2).unwrap()])],
        )
        .unwrap();
        ext.set_module_gens(vec![target.one(), Tuple::new(vec![x.clone()])])
            .unwrap();

        // c = 1 gives φ(u^2) = 1, i.e. φ(x^4) = 1 which x does not divide
        let bad = PeMap::on_quotient(src.clone(), 1, src.ambient().one()).unwrap();
        match ext.extend_pe_map(&bad, None) {
            Err(Error::NotExtendable(_)) => {}
            other => panic!("expected NotExtendable, got {other:?}"),
        }

        // c = u^2 gives φ(1) = 1 and φ(u) = φ(u^2) = 0; extension exists
        let good = PeMap::on_quotient(
            src.clone(),
            1,
            src.ambient().var("u").unwrap().pow(2).unwrap(),
        )
        .unwrap();
        let extended = ext.extend_pe_map(&good, None).unwrap();
        // restriction identity on the basis {1, x^2, x^4}
        for a in 0..3u128 {
            let basis = src.ambient().var("u").unwrap().pow(a).unwrap();
            let lhs = extended.apply(&ext.image_of(&basis).unwrap()).unwrap();
            let rhs = ext
                .image_of(&phi_eval(good.premult().part(0), 1, &basis).unwrap())
                .unwrap();
            assert_eq!(lhs, target.nf(&rhs).unwrap());
        }
    }

    #[test]
    fn identity_extension_returns_same_map() {
        let src = PresentedRing::free(ring(3, &["x"]));
        let target = ProductRing::single(src.clone());
        let ext = FiniteExtension::new(
            src.clone(),
            target.clone(),
            vec![Tuple::new(vec![src.ambient().var("x").unwrap()])],
        )
        .unwrap();
        let c = src.ambient().var("x").unwrap().pow(2).unwrap();
        let m = PeMap::on_quotient(src.clone(), 1, c.clone()).unwrap();
        let extended = ext.extend_pe_map(&m, None).unwrap();
        // same values on the truncated basis
        for a in 0..3u128 {
            let basis = Tuple::new(vec![src.ambient().var("x").unwrap().pow(a).unwrap()]);
            assert_eq!(
                extended.apply(&basis).unwrap(),
                m.apply(&basis).unwrap()
            );
        }
    }

    #[test]
    fn trace_of_square_root_extension() {
        // k[u][t]/(t^2 - u), i.e. k[x^2] inside k[x]
        for p in [3u64, 5, 7] {
            let base = PresentedRing::free(ring(p, &["u"]));
            let u = base.ambient().var("u").unwrap();
            let ext =
                MonogenicExt::new(base.clone(), "t", vec![u.neg(), base.ambient().zero()])
                    .unwrap();
            assert_eq!(ext.trace_of(&ext.one_elt()).unwrap(), base.ambient().constant(2));
            assert!(ext.trace_of(&ext.gen_power(1)).unwrap().is_zero());
            assert!(ext.is_trace_surjective(&ext.basis()).unwrap());
        }
        // purely inseparable at p = 2: the trace map vanishes identically
        let base = PresentedRing::free(ring(2, &["u"]));
        let u = base.ambient().var("u").unwrap();
        let ext =
            MonogenicExt::new(base.clone(), "t", vec![u.neg(), base.ambient().zero()]).unwrap();
        for f in ext.basis() {
            assert!(ext.trace_of(&f).unwrap().is_zero());
        }
        assert!(!ext.is_trace_surjective(&ext.basis()).unwrap());
        // trivial degree-one extension: the trace is the identity
        let triv = MonogenicExt::new(base.clone(), "s", vec![base.ambient().zero()]).unwrap();
        assert!(triv.is_trace_surjective(&triv.basis()).unwrap());
    }

    #[test]
    fn two_branch_trace_escapes_the_node() {
        // A = node inside A^N = k[u] ⊕ k[yb]; B^N = k[xf] ⊕ k[yf] with
        // xf^2 = u and yf = yb; Tr(1,1) = (2,1) is not in A
        let p = 3;
        let amb = ring(p, &["x", "y"]);
        let xy = &pv(&amb, "x") * &pv(&amb, "y");
        let node =
            PresentedRing::new(amb.clone(), Ideal::new(&amb, vec![xy]).unwrap()).unwrap();
        let c1 = PresentedRing::free(ring(p, &["u"]));
        let c2 = PresentedRing::free(ring(p, &["yb"]));
        let u = c1.ambient().var("u").unwrap();
        let yb = c2.ambient().var("yb").unwrap();
        let target = ProductRing::new(vec![c1.clone(), c2.clone()]).unwrap();
        let mut ext = FiniteExtension::new(
            node,
            target.clone(),
            vec![
                Tuple::new(vec![u.clone(), c2.ambient().zero()]),
                Tuple::new(vec![c1.ambient().zero(), yb.clone()]),
            ],
        )
        .unwrap();
        ext.set_module_gens(vec![
            target.one(),
            Tuple::new(vec![c1.ambient().one(), c2.ambient().zero()]),
        ])
        .unwrap();
        let tr = ProductMonogenicExt::new(vec![
            MonogenicExt::new(c1.clone(), "xf", vec![u.neg(), c1.ambient().zero()]).unwrap(),
            MonogenicExt::new(c2.clone(), "yf", vec![yb.neg()]).unwrap(),
        ])
        .unwrap();
        // componentwise surjective (Tr(1) = 2 on the first branch, identity on the second)
        assert!(tr.is_trace_surjective().unwrap());
        // Tr(1,1) = (2,1)
        let diag = vec![tr.comps()[0].one_elt(), tr.comps()[1].one_elt()];
        let t = tr.trace_of(&diag).unwrap();
        assert_eq!(t.part(0), &c1.ambient().constant(2));
        assert_eq!(t.part(1), &c2.ambient().one());
        let (ok, failures) = trace_lands_in_source(&tr, &ext).unwrap();
        assert!(!ok);
        assert!(!failures.is_empty());
    }
}
