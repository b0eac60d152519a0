//! Dickson polynomials of the first kind, `D_n(x, γ)`.
//!
//! `D_0 = 2`, `D_1 = x`, `D_n = x D_{n-1} - γ D_{n-2}`. Evaluation walks the
//! bits of `n` with the Lucas doubling identities
//!
//! ```text
//! D_{2k}   = D_k^2 - 2 γ^k
//! D_{2k+1} = D_k D_{k+1} - γ^k x
//! ```
//!
//! so a single value costs `O(log n)` ring multiplications.

use crate::ring::RingElem;

#[derive(Clone, Debug)]
pub struct DicksonArgs {
    pub n: u64,
    pub x: RingElem,
    pub gamma: RingElem,
}

/// `D_n(x, γ)` in the ring of `x`.
pub fn dickson_eval(args: &DicksonArgs) -> RingElem {
    let DicksonArgs { n, x, gamma } = args;
    let ring = x.modulus();
    let two = ring.from_u64(2);
    if *n == 0 {
        return two;
    }
    // Invariant: (lo, hi, g) = (D_k, D_{k+1}, γ^k) for k = prefix of n's bits.
    let mut lo = two.clone();
    let mut hi = x.clone();
    let mut g = ring.one();
    for bit in (0..64 - n.leading_zeros()).rev() {
        let cross = &(&lo * &hi) - &(&g * x);
        if (n >> bit) & 1 == 0 {
            lo = &(&lo * &lo) - &(&two * &g);
            hi = cross;
            g = &g * &g;
        } else {
            let g_next = &g * gamma;
            hi = &(&hi * &hi) - &(&two * &g_next);
            lo = cross;
            g = &g * &g_next;
        }
    }
    lo
}

/// `[A_1, …, A_count]` with `A_0 = 2`, `A_1 = a1` and `A_i = a1 A_{i-1} - A_{i-2}`,
/// i.e. `A_i = D_i(a1, 1)`.
pub fn dickson_chain(a1: &RingElem, count: usize) -> Vec<RingElem> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let mut prev = a1.modulus().from_u64(2);
    let mut cur = a1.clone();
    out.push(cur.clone());
    for _ in 1..count {
        let next = &(a1 * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
        out.push(cur.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Modulus;
    use proptest::prelude::*;

    /// Straight recurrence, independent of the doubling path.
    fn naive(n: u64, x: &RingElem, gamma: &RingElem) -> RingElem {
        let ring = x.modulus();
        let (mut a, mut b) = (ring.from_u64(2), x.clone());
        if n == 0 {
            return a;
        }
        for _ in 1..n {
            let c = &(x * &b) - &(gamma * &a);
            a = std::mem::replace(&mut b, c);
        }
        b
    }

    fn eval(n: u64, x: &RingElem, gamma: &RingElem) -> RingElem {
        dickson_eval(&DicksonArgs {
            n,
            x: x.clone(),
            gamma: gamma.clone(),
        })
    }

    #[test]
    fn small_values() {
        let f13 = Modulus::field(13).unwrap();
        for (x, g) in [(0, 0), (3, 1), (7, 11)] {
            assert_eq!(eval(0, &f13.from_u64(x), &f13.from_u64(g)), f13.from_u64(2));
        }
        assert_eq!(eval(2, &f13.from_u64(3), &f13.one()), f13.from_u64(7));
        assert_eq!(eval(12, &f13.from_i64(-1), &f13.from_u64(2)), f13.from_u64(5));
    }

    #[test]
    fn chain_examples() {
        let f13 = Modulus::field(13).unwrap();
        let c = dickson_chain(&f13.from_u64(5), 3);
        assert_eq!(c, vec![f13.from_u64(5), f13.from_u64(10), f13.from_u64(6)]);

        let f19 = Modulus::field(19).unwrap();
        let c: Vec<u64> = dickson_chain(&f19.from_u64(6), 4)
            .iter()
            .map(|a| a.to_u64().unwrap())
            .collect();
        assert_eq!(c, vec![6, 15, 8, 14]);

        let r = Modulus::new(7, 3).unwrap();
        assert!(dickson_chain(&r.from_u64(2), 10)
            .iter()
            .all(|a| a.to_u64() == Some(2)));
    }

    fn ring() -> impl Strategy<Value = Modulus> {
        (
            prop::sample::select(vec![3u64, 5, 13, 19, 101, 1009, 2_147_483_647]),
            1u32..5,
        )
            .prop_map(|(p, e)| Modulus::new(p, e).unwrap())
    }

    proptest! {
        #[test]
        fn waring_formula(r in ring(), a in any::<u64>(), b in any::<u64>(), n in 0u64..=200) {
            let (x1, x2) = (r.from_u64(a), r.from_u64(b));
            let lhs = eval(n, &(&x1 + &x2), &(&x1 * &x2));
            prop_assert_eq!(lhs, &x1.pow(n) + &x2.pow(n));
        }

        #[test]
        fn doubling_matches_recurrence(r in ring(), a in any::<u64>(), g in any::<u64>(), n in 0u64..=500) {
            let (x, gamma) = (r.from_u64(a), r.from_u64(g));
            prop_assert_eq!(eval(n, &x, &gamma), naive(n, &x, &gamma));
        }

        #[test]
        fn chain_matches_eval(r in ring(), a in any::<u64>(), count in 1usize..60) {
            let a1 = r.from_u64(a);
            let chain = dickson_chain(&a1, count);
            for (i, v) in chain.iter().enumerate() {
                prop_assert_eq!(v, &eval(i as u64 + 1, &a1, &r.one()));
            }
        }
    }
}
