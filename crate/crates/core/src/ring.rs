//! Presented quotient rings S/I and finite products of them.
//!
//! A product ring is the universal container: a plain quotient is a product
//! with one component, and an element is a tuple with one entry per
//! component.  Representatives are kept in normal form against the cached
//! Gröbner basis of the defining ideal, so equality of elements is equality
//! of normal forms.

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::order::MonomialOrder;
use crate::poly::{ArithOp, MultiPoly, PolyRing};
use std::fmt;

/// A quotient presentation S/I over F_p.
#[derive(Clone, PartialEq, Debug)]
pub struct PresentedRing {
    ambient: PolyRing,
    defining: Ideal,
}

impl PresentedRing {
    pub fn new(ambient: PolyRing, defining: Ideal) -> Result<PresentedRing> {
        if defining.ring() != &ambient {
            return Err(Error::SignatureMismatch(
                "defining ideal lives in a different ambient ring".into(),
            ));
        }
        Ok(PresentedRing { ambient, defining })
    }

    pub fn free(ambient: PolyRing) -> PresentedRing {
        let defining = Ideal::zero(&ambient);
        PresentedRing { ambient, defining }
    }

    pub fn ambient(&self) -> &PolyRing {
        &self.ambient
    }

    pub fn defining(&self) -> &Ideal {
        &self.defining
    }

    pub fn p(&self) -> u64 {
        self.ambient.p()
    }

    pub fn is_free(&self) -> bool {
        self.defining.is_zero_ideal()
    }

    /// Normal form of a representative.
    pub fn nf(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if f.ring() != &self.ambient {
            return Err(Error::SignatureMismatch(
                "element outside the ambient ring".into(),
            ));
        }
        self.defining.normal_form(f, MonomialOrder::GrevLex)
    }

    pub fn eq_elems(&self, f: &MultiPoly, g: &MultiPoly) -> Result<bool> {
        Ok(self.nf(&f.arith(g, ArithOp::Sub)?)?.is_zero())
    }

    pub fn is_zero_elem(&self, f: &MultiPoly) -> Result<bool> {
        Ok(self.nf(f)?.is_zero())
    }

    /// The ideal of the origin (all variables).
    pub fn origin_ideal(&self) -> Ideal {
        let gens = (0..self.ambient.nvars())
            .map(|i| self.ambient.var_by_index(i))
            .collect();
        Ideal::new(&self.ambient, gens).unwrap()
    }
}

/// A finite product of presented rings; operations are componentwise.
#[derive(Clone, PartialEq, Debug)]
pub struct ProductRing {
    components: Vec<PresentedRing>,
}

impl ProductRing {
    pub fn new(components: Vec<PresentedRing>) -> Result<ProductRing> {
        if components.is_empty() {
            return Err(Error::Invalid("product ring needs a component".into()));
        }
        let p = components[0].p();
        if components.iter().any(|c| c.p() != p) {
            return Err(Error::SignatureMismatch(
                "mixed characteristics in a product ring".into(),
            ));
        }
        Ok(ProductRing { components })
    }

    pub fn single(component: PresentedRing) -> ProductRing {
        ProductRing {
            components: vec![component],
        }
    }

    pub fn components(&self) -> &[PresentedRing] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn p(&self) -> u64 {
        self.components[0].p()
    }

    /// The unique single component, for callers that require one.
    pub fn sole(&self) -> Result<&PresentedRing> {
        if self.components.len() != 1 {
            return Err(Error::Invalid(format!(
                "expected a single-component ring, found {} components",
                self.components.len()
            )));
        }
        Ok(&self.components[0])
    }

    pub fn one(&self) -> Tuple {
        Tuple {
            parts: self
                .components
                .iter()
                .map(|c| c.ambient().one())
                .collect(),
        }
    }

    pub fn zero(&self) -> Tuple {
        Tuple {
            parts: self
                .components
                .iter()
                .map(|c| c.ambient().zero())
                .collect(),
        }
    }

    pub fn check_tuple(&self, t: &Tuple) -> Result<()> {
        if t.parts.len() != self.components.len() {
            return Err(Error::SignatureMismatch(format!(
                "tuple has {} parts, ring has {} components",
                t.parts.len(),
                self.components.len()
            )));
        }
        for (part, comp) in t.parts.iter().zip(&self.components) {
            if part.ring() != comp.ambient() {
                return Err(Error::SignatureMismatch(
                    "tuple part outside its component ambient ring".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn nf(&self, t: &Tuple) -> Result<Tuple> {
        self.check_tuple(t)?;
        let parts = t
            .parts
            .iter()
            .zip(&self.components)
            .map(|(f, c)| c.nf(f))
            .collect::<Result<_>>()?;
        Ok(Tuple { parts })
    }

    pub fn eq_elems(&self, a: &Tuple, b: &Tuple) -> Result<bool> {
        Ok(self.nf(&a.arith(b, ArithOp::Sub)?)? == self.nf(&self.zero())?)
    }

    pub fn is_zero_elem(&self, t: &Tuple) -> Result<bool> {
        Ok(self.nf(t)?.parts.iter().all(|f| f.is_zero()))
    }
}

impl From<PresentedRing> for ProductRing {
    fn from(r: PresentedRing) -> Self {
        ProductRing::single(r)
    }
}

/// An element of a product ring: one ambient representative per component.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tuple {
    parts: Vec<MultiPoly>,
}

impl Tuple {
    pub fn new(parts: Vec<MultiPoly>) -> Tuple {
        assert!(!parts.is_empty(), "tuple needs at least one part");
        Tuple { parts }
    }

    pub fn parts(&self) -> &[MultiPoly] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &MultiPoly {
        &self.parts[i]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn arith(&self, other: &Tuple, op: ArithOp) -> Result<Tuple> {
        if self.parts.len() != other.parts.len() {
            return Err(Error::SignatureMismatch("tuple arity mismatch".into()));
        }
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.arith(b, op))
            .collect::<Result<_>>()?;
        Ok(Tuple { parts })
    }

    pub fn map<F: FnMut(&MultiPoly) -> Result<MultiPoly>>(&self, mut f: F) -> Result<Tuple> {
        let parts = self.parts.iter().map(|x| f(x)).collect::<Result<_>>()?;
        Ok(Tuple { parts })
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.len() == 1 {
            write!(f, "{}", self.parts[0])
        } else {
            write!(
                f,
                "({})",
                self.parts
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        }
    }
}

impl fmt::Debug for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_forms_identify_elements() {
        // in k[x,y]/(xy) the elements x*y and 0 coincide
        let amb = PolyRing::new(3, &["x", "y"]).unwrap();
        let xy = &amb.var("x").unwrap() * &amb.var("y").unwrap();
        let r = PresentedRing::new(amb.clone(), Ideal::new(&amb, vec![xy.clone()]).unwrap())
            .unwrap();
        assert!(r.is_zero_elem(&xy).unwrap());
        assert!(!r.is_zero_elem(&amb.var("x").unwrap()).unwrap());
        assert!(r
            .eq_elems(
                &(&amb.var("x").unwrap() + &xy),
                &amb.var("x").unwrap()
            )
            .unwrap());
    }

    #[test]
    fn product_componentwise() {
        let c1 = PresentedRing::free(PolyRing::new(3, &["u"]).unwrap());
        let c2 = PresentedRing::free(PolyRing::new(3, &["v"]).unwrap());
        let pr = ProductRing::new(vec![c1.clone(), c2.clone()]).unwrap();
        let u = c1.ambient().var("u").unwrap();
        let v = c2.ambient().var("v").unwrap();
        let a = Tuple::new(vec![u.clone(), c2.ambient().zero()]);
        let b = Tuple::new(vec![c1.ambient().zero(), v.clone()]);
        let s = a.arith(&b, ArithOp::Add).unwrap();
        assert_eq!(s, Tuple::new(vec![u.clone(), v.clone()]));
        // (u,0)*(0,v) = 0 in the product
        let prod = a.arith(&b, ArithOp::Mul).unwrap();
        assert!(pr.is_zero_elem(&prod).unwrap());
        assert_eq!(format!("{s}"), "(u, v)");
    }

    #[test]
    fn mixed_characteristic_rejected() {
        let c1 = PresentedRing::free(PolyRing::new(3, &["u"]).unwrap());
        let c2 = PresentedRing::free(PolyRing::new(5, &["v"]).unwrap());
        assert!(ProductRing::new(vec![c1, c2]).is_err());
    }
}
