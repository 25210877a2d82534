//! Gröbner bases over F_p and the ideal-theoretic subroutines built on them:
//! membership, colon, elimination, intersection and subalgebra membership.
//!
//! The engine is Buchberger's algorithm with the sugar selection strategy and
//! both classical criteria.  Everything is deterministic: generators are
//! sorted, the pair queue has a total key, and reducers are chosen in basis
//! order, so recomputing a basis always reproduces it bit for bit.

use crate::error::{Error, Result};
use crate::fp;
use crate::order::MonomialOrder;
use crate::poly::{ArithOp, Monomial, MultiPoly, PolyRing};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

static SELF_CHECK_PASSES: AtomicU64 = AtomicU64::new(0);

/// Number of Buchberger self-checks (all S-pairs of a finished basis reduce
/// to zero) that have passed in this process.
pub fn self_check_count() -> u64 {
    SELF_CHECK_PASSES.load(AtomicOrdering::Relaxed)
}

/// Resource caps for basis computations.  Exceeding a cap is a hard error,
/// never a silent wrong answer.
#[derive(Clone, Debug)]
pub struct GbConfig {
    pub max_pairs: usize,
    pub max_degree: u128,
    pub self_check: bool,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            max_pairs: 100_000,
            max_degree: 200,
            self_check: true,
        }
    }
}

/// Multivariate division: returns (quotients, remainder) with
/// `f = sum q_i * d_i + r` and no term of `r` divisible by any leading term.
pub fn divide(
    f: &MultiPoly,
    divisors: &[MultiPoly],
    ord: MonomialOrder,
) -> Result<(Vec<MultiPoly>, MultiPoly)> {
    let ring = f.ring().clone();
    let p = ring.p();
    let lts: Vec<(Monomial, u64)> = divisors
        .iter()
        .map(|d| {
            d.leading_term(ord)
                .map(|(m, c)| (m.clone(), c))
                .ok_or_else(|| Error::Invalid("division by zero polynomial".into()))
        })
        .collect::<Result<_>>()?;
    let mut quotients = vec![ring.zero(); divisors.len()];
    let mut remainder = ring.zero();
    let mut work = f.clone();
    while let Some((lm, lc)) = work.leading_term(ord).map(|(m, c)| (m.clone(), c)) {
        let mut reduced = false;
        for (i, (dm, dc)) in lts.iter().enumerate() {
            if dm.divides(&lm) {
                let factor_m = lm.div(dm);
                let factor_c = fp::mul(lc, fp::inv(*dc, p), p);
                let t = ring.monomial(factor_m, factor_c as i128);
                quotients[i] = quotients[i].arith(&t, ArithOp::Add)?;
                let sub = divisors[i].arith(&t, ArithOp::Mul)?;
                work = work.arith(&sub, ArithOp::Sub)?;
                reduced = true;
                break;
            }
        }
        if !reduced {
            let t = ring.monomial(lm.clone(), lc as i128);
            remainder = remainder.arith(&t, ArithOp::Add)?;
            work = work.arith(&t, ArithOp::Sub)?;
        }
    }
    Ok((quotients, remainder))
}

/// Remainder of `f` on division by `basis`.
pub fn normal_form(f: &MultiPoly, basis: &[MultiPoly], ord: MonomialOrder) -> Result<MultiPoly> {
    Ok(divide(f, basis, ord)?.1)
}

fn s_poly(f: &MultiPoly, g: &MultiPoly, ord: MonomialOrder) -> Result<MultiPoly> {
    let (fm, fc) = f.leading_term(ord).expect("s_poly of zero");
    let (gm, gc) = g.leading_term(ord).expect("s_poly of zero");
    let l = fm.lcm(gm);
    let p = f.ring().p();
    let a = f.mul_monomial(&l.div(fm), fp::inv(fc, p))?;
    let b = g.mul_monomial(&l.div(gm), fp::inv(gc, p))?;
    a.arith(&b, ArithOp::Sub)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    sugar: u128,
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Buchberger with sugar selection and both criteria; returns the reduced
/// Gröbner basis, monic, sorted ascending by leading monomial.
pub fn buchberger(
    gens: &[MultiPoly],
    ord: MonomialOrder,
    cfg: &GbConfig,
) -> Result<Vec<MultiPoly>> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => return Ok(Vec::new()),
    };
    let mut basis: Vec<MultiPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic(ord))
        .collect();
    basis.sort_by(|a, b| {
        let la = a.leading_term(ord).unwrap().0.clone();
        let lb = b.leading_term(ord).unwrap().0.clone();
        ord.cmp(&la, &lb).then_with(|| a.sorted_terms().cmp(&b.sorted_terms()))
    });
    basis.dedup();
    if basis.is_empty() {
        return Ok(Vec::new());
    }

    let mut sugars: Vec<u128> = basis.iter().map(|g| g.total_deg()).collect();
    let mut queue: BTreeSet<PairKey> = BTreeSet::new();
    let mut considered: BTreeSet<(usize, usize)> = BTreeSet::new();
    let make_key = |basis: &[MultiPoly], sugars: &[u128], i: usize, j: usize| -> PairKey {
        let li = basis[i].leading_term(ord).unwrap().0.clone();
        let lj = basis[j].leading_term(ord).unwrap().0.clone();
        let lcm = li.lcm(&lj);
        let s = (sugars[i] - li.deg())
            .max(sugars[j] - lj.deg())
            .saturating_add(lcm.deg());
        PairKey { sugar: s, lcm, i, j }
    };
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            queue.insert(make_key(&basis, &sugars, i, j));
        }
    }

    let mut pairs_done = 0usize;
    while let Some(key) = queue.iter().next().cloned() {
        queue.remove(&key);
        let (i, j) = (key.i, key.j);
        considered.insert((i, j));
        pairs_done += 1;
        if pairs_done > cfg.max_pairs {
            return Err(Error::ResourceLimit(format!(
                "pair count exceeded {}",
                cfg.max_pairs
            )));
        }
        let li = basis[i].leading_term(ord).unwrap().0.clone();
        let lj = basis[j].leading_term(ord).unwrap().0.clone();
        // first criterion: coprime leading monomials
        if li.try_mul(&lj)? == key.lcm {
            continue;
        }
        // chain criterion: some k with LT(k) | lcm and both pairs done
        let mut skip = false;
        for k in 0..basis.len() {
            if k == i || k == j {
                continue;
            }
            let lk = basis[k].leading_term(ord).unwrap().0;
            if lk.divides(&key.lcm)
                && considered.contains(&(i.min(k), i.max(k)))
                && considered.contains(&(j.min(k), j.max(k)))
            {
                skip = true;
                break;
            }
        }
        if skip {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j], ord)?;
        let r = normal_form(&s, &basis, ord)?;
        if r.is_zero() {
            continue;
        }
        if r.total_deg() > cfg.max_degree {
            return Err(Error::ResourceLimit(format!(
                "degree exceeded {} during basis computation",
                cfg.max_degree
            )));
        }
        let r = r.monic(ord);
        let new_sugar = key.sugar.max(r.total_deg());
        let idx = basis.len();
        basis.push(r);
        sugars.push(new_sugar);
        for k in 0..idx {
            queue.insert(make_key(&basis, &sugars, k, idx));
        }
    }

    let reduced = reduce_basis(&ring, basis, ord)?;
    if cfg.self_check {
        for i in 0..reduced.len() {
            for j in i + 1..reduced.len() {
                let s = s_poly(&reduced[i], &reduced[j], ord)?;
                if !normal_form(&s, &reduced, ord)?.is_zero() {
                    return Err(Error::Internal(
                        "Buchberger self-check failed: an S-pair does not reduce to zero".into(),
                    ));
                }
            }
        }
        SELF_CHECK_PASSES.fetch_add(1, AtomicOrdering::Relaxed);
    }
    Ok(reduced)
}

fn reduce_basis(
    ring: &PolyRing,
    mut basis: Vec<MultiPoly>,
    ord: MonomialOrder,
) -> Result<Vec<MultiPoly>> {
    let _ = ring;
    // minimalize: drop any element whose leading monomial is divisible by
    // another surviving leading monomial
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let li = basis[i].leading_term(ord).unwrap().0.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lj = basis[j].leading_term(ord).unwrap().0;
            if lj.divides(&li) && (lj != &li || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    basis = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| if k { Some(g) } else { None })
        .collect();
    // tail-reduce each element against the others
    let mut out: Vec<MultiPoly> = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let others: Vec<MultiPoly> = basis
            .iter()
            .enumerate()
            .filter_map(|(j, g)| if j != i { Some(g.clone()) } else { None })
            .collect();
        let r = normal_form(&basis[i], &others, ord)?;
        if !r.is_zero() {
            out.push(r.monic(ord));
        }
    }
    out.sort_by(|a, b| {
        let la = a.leading_term(ord).unwrap().0.clone();
        let lb = b.leading_term(ord).unwrap().0.clone();
        ord.cmp(&la, &lb)
    });
    out.dedup();
    Ok(out)
}

/// A finitely generated ideal with lazily cached reduced Gröbner bases, one
/// per monomial order.  The cache is compute-then-publish: concurrent readers
/// may duplicate work but always observe the same (deterministic) basis.
#[derive(Clone)]
pub struct Ideal {
    ring: PolyRing,
    gens: Vec<MultiPoly>,
    cache: Arc<Mutex<BTreeMap<MonomialOrder, Arc<Vec<MultiPoly>>>>>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens
    }
}
impl Eq for Ideal {}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})",
            self.gens
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

impl Ideal {
    pub fn new(ring: &PolyRing, gens: Vec<MultiPoly>) -> Result<Ideal> {
        let mut clean: Vec<MultiPoly> = Vec::new();
        for g in gens {
            if g.ring() != ring {
                return Err(Error::SignatureMismatch(
                    "ideal generator outside ambient ring".into(),
                ));
            }
            if !g.is_zero() {
                clean.push(g);
            }
        }
        clean.sort_by(|a, b| a.sorted_terms().cmp(&b.sorted_terms()));
        clean.dedup();
        Ok(Ideal {
            ring: ring.clone(),
            gens: clean,
            cache: Arc::new(Mutex::new(BTreeMap::new())),
        })
    }

    pub fn zero(ring: &PolyRing) -> Ideal {
        Ideal::new(ring, Vec::new()).unwrap()
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gb(&self, ord: MonomialOrder) -> Result<Arc<Vec<MultiPoly>>> {
        self.gb_with(ord, &GbConfig::default())
    }

    pub fn gb_with(&self, ord: MonomialOrder, cfg: &GbConfig) -> Result<Arc<Vec<MultiPoly>>> {
        if let Some(b) = self.cache.lock().unwrap().get(&ord) {
            return Ok(b.clone());
        }
        let basis = Arc::new(buchberger(&self.gens, ord, cfg)?);
        let mut cache = self.cache.lock().unwrap();
        Ok(cache.entry(ord).or_insert(basis).clone())
    }

    pub fn normal_form(&self, f: &MultiPoly, ord: MonomialOrder) -> Result<MultiPoly> {
        let basis = self.gb(ord)?;
        normal_form(f, &basis, ord)
    }

    /// Membership: true iff the normal form vanishes.
    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        if f.ring() != &self.ring {
            return Err(Error::SignatureMismatch("membership across rings".into()));
        }
        Ok(self.normal_form(f, MonomialOrder::GrevLex)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in other.gens() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn eq_ideal(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        let gb = self.gb(MonomialOrder::GrevLex)?;
        Ok(gb.len() == 1 && gb[0].is_one())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        if self.ring != other.ring {
            return Err(Error::SignatureMismatch("ideal sum across rings".into()));
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.arith(b, ArithOp::Mul)?);
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// Intersection via the single auxiliary variable trick:
    /// I ∩ J = (t·I + (1−t)·J) ∩ k[x].
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        if self.ring != other.ring {
            return Err(Error::SignatureMismatch(
                "ideal intersection across rings".into(),
            ));
        }
        if self.is_zero_ideal() || other.is_zero_ideal() {
            return Ok(Ideal::zero(&self.ring));
        }
        let aux = fresh_name("t", self.ring.vars());
        let mut vars: Vec<String> = vec![aux];
        vars.extend(self.ring.vars().iter().cloned());
        let big = PolyRing::new(self.ring.p(), &vars)?;
        let t = big.var_by_index(0);
        let one_minus_t = &big.one() - &t;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&g.rename_into(&big)? * &t);
        }
        for g in &other.gens {
            gens.push(&g.rename_into(&big)? * &one_minus_t);
        }
        let big_ideal = Ideal::new(&big, gens)?;
        let basis = big_ideal.gb(MonomialOrder::Block(1))?;
        let keep: Vec<usize> = (1..big.nvars()).collect();
        let mut out = Vec::new();
        for g in basis.iter() {
            if g.supported_on(&keep) {
                out.push(g.rename_into(&self.ring)?);
            }
        }
        Ideal::new(&self.ring, out)
    }

    /// Colon by a single element: (I : f) = (I ∩ (f)) / f.
    pub fn colon_element(&self, f: &MultiPoly) -> Result<Ideal> {
        if f.is_zero() {
            // (I : 0) is the unit ideal
            return Ideal::new(&self.ring, vec![self.ring.one()]);
        }
        let principal = Ideal::new(&self.ring, vec![f.clone()])?;
        let inter = self.intersect(&principal)?;
        let mut gens = Vec::new();
        for g in inter.gens() {
            let (q, r) = divide(g, std::slice::from_ref(f), MonomialOrder::GrevLex)?;
            if !r.is_zero() {
                return Err(Error::Internal(
                    "colon witness not divisible by its element".into(),
                ));
            }
            gens.push(q.into_iter().next().unwrap());
        }
        Ideal::new(&self.ring, gens)
    }

    /// (I : J) = ∩ over generators g of J of (I : g).
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        if self.ring != other.ring {
            return Err(Error::SignatureMismatch("colon across rings".into()));
        }
        if other.is_zero_ideal() {
            return Ideal::new(&self.ring, vec![self.ring.one()]);
        }
        let mut acc: Option<Ideal> = None;
        for g in other.gens() {
            let c = self.colon_element(g)?;
            acc = Some(match acc {
                None => c,
                Some(prev) => prev.intersect(&c)?,
            });
        }
        Ok(acc.unwrap())
    }

    /// I ∩ k[keep]: elimination by a block order after moving the eliminated
    /// variables to the front.  Generators of the result only involve `keep`.
    pub fn eliminate(&self, keep: &[usize]) -> Result<Ideal> {
        let n = self.ring.nvars();
        for &i in keep {
            if i >= n {
                return Err(Error::Invalid("eliminate: variable index out of range".into()));
            }
        }
        let eliminated: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        if eliminated.is_empty() {
            return Ok(self.clone());
        }
        // permuted ring: eliminated block first
        let perm: Vec<usize> = eliminated
            .iter()
            .chain(keep.iter().filter(|i| !eliminated.contains(i)))
            .copied()
            .collect();
        let vars: Vec<String> = perm.iter().map(|&i| self.ring.vars()[i].clone()).collect();
        let permuted = PolyRing::new(self.ring.p(), &vars)?;
        let gens: Vec<MultiPoly> = self
            .gens
            .iter()
            .map(|g| g.permute_vars(&permuted, &perm))
            .collect();
        let ideal = Ideal::new(&permuted, gens)?;
        let basis = ideal.gb(MonomialOrder::Block(eliminated.len()))?;
        let kept_positions: Vec<usize> = (eliminated.len()..n).collect();
        let mut out = Vec::new();
        for g in basis.iter() {
            if g.supported_on(&kept_positions) {
                out.push(g.rename_into(&self.ring)?);
            }
        }
        Ideal::new(&self.ring, out)
    }
}

/// A variable name not colliding with any in `taken`.
pub fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Subalgebra membership by tag variables and an elimination order.
///
/// Decides whether `h` (mod `target_ideal`) lies in the subalgebra generated
/// by `images`, and if so returns a preimage expressed in the variables of
/// `tag_ring` (whose i-th variable corresponds to `images[i]`).
pub fn subalgebra_member(
    h: &MultiPoly,
    images: &[MultiPoly],
    target_ideal: &Ideal,
    tag_ring: &PolyRing,
    cfg: &GbConfig,
) -> Result<Option<MultiPoly>> {
    let target = target_ideal.ring().clone();
    if h.ring() != &target {
        return Err(Error::SignatureMismatch("membership probe outside target".into()));
    }
    if images.len() != tag_ring.nvars() {
        return Err(Error::Invalid("one image per tag variable required".into()));
    }
    let ntarget = target.nvars();
    let mut vars: Vec<String> = target.vars().to_vec();
    let mut tag_names: Vec<String> = Vec::new();
    for v in tag_ring.vars() {
        let name = fresh_name(v, &vars);
        vars.push(name.clone());
        tag_names.push(name);
    }
    let big = PolyRing::new(target.p(), &vars)?;
    let mut gens: Vec<MultiPoly> = target_ideal
        .gens()
        .iter()
        .map(|g| g.rename_into(&big))
        .collect::<Result<_>>()?;
    for (k, img) in images.iter().enumerate() {
        let tag = big.var(&tag_names[k])?;
        gens.push(&tag - &img.rename_into(&big)?);
    }
    let ideal = Ideal::new(&big, gens)?;
    let basis = ideal.gb_with(MonomialOrder::Block(ntarget), cfg)?;
    let nf = normal_form(&h.rename_into(&big)?, &basis, MonomialOrder::Block(ntarget))?;
    let tag_positions: Vec<usize> = (ntarget..big.nvars()).collect();
    if !nf.supported_on(&tag_positions) {
        return Ok(None);
    }
    // read the tag-supported normal form back in the tag ring
    let mut images_back: Vec<MultiPoly> = vec![tag_ring.zero(); big.nvars()];
    for (k, _) in tag_names.iter().enumerate() {
        images_back[ntarget + k] = tag_ring.var_by_index(k);
    }
    Ok(Some(nf.eval(tag_ring, &images_back)?))
}
