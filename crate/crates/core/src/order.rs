//! Monomial orders: total, multiplicative, with 1 minimal.

use crate::poly::Monomial;
use std::cmp::Ordering;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Elimination order: the first `k` variables form the dominant block
    /// (compared by grevlex), ties broken by grevlex on the rest.
    Block(usize),
}

fn grevlex_slice(a: &[u128], b: &[u128]) -> Ordering {
    let da: u128 = a.iter().sum();
    let db: u128 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    // equal degree: the last variable in which they differ decides,
    // smaller exponent there means larger monomial
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exps(), b.exps());
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => grevlex_slice(a, b),
            MonomialOrder::Block(k) => {
                let k = (*k).min(a.len());
                match grevlex_slice(&a[..k], &b[..k]) {
                    Ordering::Equal => grevlex_slice(&a[k..], &b[k..]),
                    o => o,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[u128]) -> Monomial {
        Monomial::new(v.to_vec())
    }

    #[test]
    fn lex_basics() {
        let ord = MonomialOrder::Lex;
        assert_eq!(ord.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(ord.cmp(&m(&[1, 2]), &m(&[1, 3])), Ordering::Less);
    }

    #[test]
    fn grevlex_basics() {
        let ord = MonomialOrder::GrevLex;
        // degree dominates
        assert_eq!(ord.cmp(&m(&[0, 3]), &m(&[2, 0])), Ordering::Greater);
        // x^2 y > x y^2 (smaller exponent on the last variable wins)
        assert_eq!(ord.cmp(&m(&[2, 1]), &m(&[1, 2])), Ordering::Greater);
        // 1 is minimal
        assert_eq!(ord.cmp(&m(&[0, 0]), &m(&[0, 1])), Ordering::Less);
    }

    #[test]
    fn block_eliminates_leading_vars() {
        // with Block(1) any power of the first variable beats the rest
        let ord = MonomialOrder::Block(1);
        assert_eq!(ord.cmp(&m(&[1, 0, 0]), &m(&[0, 9, 9])), Ordering::Greater);
        assert_eq!(ord.cmp(&m(&[0, 2, 1]), &m(&[0, 1, 2])), Ordering::Greater);
    }

    #[test]
    fn multiplicative() {
        // a > b implies a*c > b*c for each order
        let a = m(&[2, 1, 0]);
        let b = m(&[1, 1, 1]);
        let c = m(&[3, 0, 2]);
        for ord in [
            MonomialOrder::Lex,
            MonomialOrder::GrevLex,
            MonomialOrder::Block(2),
        ] {
            let ab = ord.cmp(&a, &b);
            let ac = a.try_mul(&c).unwrap();
            let bc = b.try_mul(&c).unwrap();
            assert_eq!(ord.cmp(&ac, &bc), ab);
        }
    }
}
