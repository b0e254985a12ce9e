//! Arithmetic in GF(2^m) for m up to 16.
//!
//! Elements are bit-packed polynomials over F2: bit i of the word is the
//! coefficient of x^i, and every element keeps degree below m. Multiplication
//! reduces modulo an irreducible modulus of degree m. The default moduli come
//! from a fixed table of primitive polynomials so generated matrices are
//! identical across runs and platforms.

use crate::f2::BitVector;
use crate::{Error, Result};

/// Bit-packed field element: bit i holds the coefficient of x^i.
pub type FieldElement = u64;

/// Primitive polynomials of degree 1..=16, including the x^m term.
/// Index k holds the modulus for m = k + 1.
const STANDARD_MODULI: [u64; 16] = [
    0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

pub const MAX_DEGREE: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldParams {
    m: u32,
    modulus: u64,
    alpha: FieldElement,
}

impl FieldParams {
    pub fn m(&self) -> u32 {
        self.m
    }

    /// The modulus polynomial, including the x^m bit.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// A generator of the multiplicative group.
    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    /// Size of the multiplicative group, 2^m − 1.
    pub fn group_order(&self) -> u64 {
        (1u64 << self.m) - 1
    }
}

/// Builds GF(2^m) with the standard modulus for that degree.
pub fn make_field(m: u32) -> Result<FieldParams> {
    if m < 1 || m > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "field degree must be between 1 and {MAX_DEGREE}, got {m}"
        )));
    }
    let modulus = STANDARD_MODULI[(m - 1) as usize];
    let alpha = reduce_poly(2, m, modulus);
    let params = FieldParams { m, modulus, alpha };
    // The table is frozen; a wrong entry is a defect, not an input error.
    assert!(
        element_order(alpha, &params) == params.group_order(),
        "standard modulus for m={m} is not primitive"
    );
    Ok(params)
}

/// Builds GF(2^m) with a caller-supplied modulus. The modulus must have
/// degree exactly m and be irreducible; the generator is found by exhaustive
/// order search starting from x.
pub fn make_field_with_modulus(m: u32, modulus: u64) -> Result<FieldParams> {
    if m < 1 || m > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "field degree must be between 1 and {MAX_DEGREE}, got {m}"
        )));
    }
    if poly_degree(modulus) != m as i32 {
        return Err(Error::InvalidArgument(format!(
            "modulus {modulus:#x} does not have degree {m}"
        )));
    }
    if !is_irreducible(modulus, m) {
        return Err(Error::InvalidArgument(format!(
            "modulus {modulus:#x} is reducible over F2"
        )));
    }
    let mut params = FieldParams { m, modulus, alpha: 0 };
    let order = params.group_order();
    // m = 1 has the empty search range below; its only nonzero element is 1.
    if m == 1 {
        params.alpha = 1;
        return Ok(params);
    }
    for candidate in 2..=order {
        if element_order(candidate, &params) == order {
            params.alpha = candidate;
            return Ok(params);
        }
    }
    unreachable!("every finite field has a generator")
}

/// Field addition is coefficient-wise XOR.
pub fn gf_add(a: FieldElement, b: FieldElement) -> FieldElement {
    a ^ b
}

/// Polynomial product reduced modulo the field modulus.
pub fn gf_mul(a: FieldElement, b: FieldElement, p: &FieldParams) -> FieldElement {
    debug_assert!(a >> p.m == 0 && b >> p.m == 0, "operands must be reduced");
    let mut a = a;
    let mut b = b;
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> p.m) & 1 == 1 {
            a ^= p.modulus;
        }
    }
    acc
}

/// Square-and-multiply power. Exponents of nonzero bases reduce modulo the
/// group order, so `gf_pow(a, 2^m − 1)` is 1 for every nonzero `a`.
pub fn gf_pow(a: FieldElement, k: u64, p: &FieldParams) -> Result<FieldElement> {
    if a == 0 {
        return if k == 0 {
            Err(Error::InvalidArgument("0^0 is undefined".into()))
        } else {
            Ok(0)
        };
    }
    let mut k = k % p.group_order();
    let mut base = a;
    let mut acc: FieldElement = 1;
    while k != 0 {
        if k & 1 == 1 {
            acc = gf_mul(acc, base, p);
        }
        base = gf_mul(base, base, p);
        k >>= 1;
    }
    Ok(acc)
}

/// Multiplicative order of a nonzero element, by repeated multiplication.
pub fn element_order(a: FieldElement, p: &FieldParams) -> u64 {
    assert!(a != 0, "zero has no multiplicative order");
    let mut x = a;
    let mut n = 1u64;
    while x != 1 {
        x = gf_mul(x, a, p);
        n += 1;
        assert!(n <= p.group_order(), "order search exceeded group size");
    }
    n
}

/// Coefficient vector of length m, coefficient of x^i at index i.
pub fn element_bits(a: FieldElement, m: u32) -> BitVector {
    debug_assert!(a >> m == 0, "element must be reduced");
    let mut v = BitVector::zeros(m as usize);
    for i in 0..m as usize {
        if (a >> i) & 1 == 1 {
            v.set(i, true);
        }
    }
    v
}

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b);
    debug_assert!(db >= 0, "division by zero polynomial");
    loop {
        let da = poly_degree(a);
        if da < db {
            return a;
        }
        a ^= b << (da - db);
    }
}

/// Trial division by every polynomial of degree 1..=m/2.
fn is_irreducible(poly: u64, m: u32) -> bool {
    for deg in 1..=m / 2 {
        for low in 0..(1u64 << deg) {
            let candidate = (1u64 << deg) | low;
            if poly_rem(poly, candidate) == 0 {
                return false;
            }
        }
    }
    true
}

fn reduce_poly(a: u64, m: u32, modulus: u64) -> u64 {
    let mut a = a;
    while poly_degree(a) >= m as i32 {
        a ^= modulus << (poly_degree(a) - m as i32);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn standard_moduli_are_primitive_for_every_degree() {
        for m in 1..=MAX_DEGREE {
            let p = make_field(m).unwrap();
            let order = p.group_order();
            let mut seen = HashSet::new();
            let mut x: FieldElement = 1;
            for _ in 0..order {
                assert!(x != 0, "power of alpha hit zero for m={m}");
                assert!(seen.insert(x), "repeated power of alpha for m={m}");
                x = gf_mul(x, p.alpha(), &p);
            }
            assert_eq!(x, 1, "alpha order is not the group order for m={m}");
            assert_eq!(seen.len() as u64, order);
        }
    }

    #[test]
    fn degree_bounds_are_enforced() {
        assert!(make_field(0).is_err());
        assert!(make_field(17).is_err());
        assert!(make_field_with_modulus(0, 0x3).is_err());
    }

    #[test]
    fn gf8_products_match_long_division() {
        let p = make_field(3).unwrap();
        assert_eq!(p.modulus(), 0xB);
        let a = p.alpha();
        assert_eq!(a, 0b010);
        // x^2 * x^2 = x^4 = x^2 + x  (mod x^3 + x + 1)
        let a2 = gf_mul(a, a, &p);
        assert_eq!(gf_mul(a2, a2, &p), 0b110);
        // Successive powers of x enumerate the nonzero elements.
        let mut powers = vec![1u64];
        for _ in 0..6 {
            powers.push(gf_mul(*powers.last().unwrap(), a, &p));
        }
        assert_eq!(powers, vec![1, 2, 4, 3, 6, 7, 5]);
        assert_eq!(gf_mul(5, a, &p), 1);
    }

    #[test]
    fn prime_field_degenerates_to_f2() {
        let p = make_field(1).unwrap();
        assert_eq!(p.alpha(), 1);
        assert_eq!(gf_mul(1, 1, &p), 1);
        assert_eq!(gf_pow(1, 12, &p).unwrap(), 1);
    }

    #[test]
    fn identity_and_absorbing_elements() {
        let p = make_field(4).unwrap();
        for a in 0..16u64 {
            assert_eq!(gf_mul(a, 1, &p), a);
            assert_eq!(gf_mul(a, 0, &p), 0);
            assert_eq!(gf_add(a, a), 0);
        }
    }

    #[test]
    fn pow_contract() {
        let p = make_field(5).unwrap();
        assert!(matches!(gf_pow(0, 0, &p), Err(Error::InvalidArgument(_))));
        assert_eq!(gf_pow(0, 7, &p).unwrap(), 0);
        assert_eq!(gf_pow(p.alpha(), 0, &p).unwrap(), 1);
        assert_eq!(gf_pow(p.alpha(), 31, &p).unwrap(), 1);
        for k in 0..40 {
            assert_eq!(
                gf_pow(p.alpha(), k, &p).unwrap(),
                gf_pow(p.alpha(), k + 31, &p).unwrap(),
                "exponents must reduce modulo the group order"
            );
        }
    }

    #[test]
    fn inverse_via_fermat() {
        for m in 1..=4 {
            let p = make_field(m).unwrap();
            for a in 1..(1u64 << m) {
                let inv = gf_pow(a, p.group_order() - 1, &p).unwrap();
                assert_eq!(gf_mul(a, inv, &p), 1, "m={m} a={a}");
            }
        }
    }

    #[test]
    fn squaring_distributes_over_sums() {
        let p = make_field(4).unwrap();
        for a in 0..16u64 {
            for b in 0..16u64 {
                let sq = |x| gf_mul(x, x, &p);
                assert_eq!(sq(gf_add(a, b)), gf_add(sq(a), sq(b)));
            }
        }
    }

    #[test]
    fn pow_is_additive_in_the_exponent() {
        for m in 1..=8 {
            let p = make_field(m).unwrap();
            let order = p.group_order();
            for i in 0..order {
                for j in 0..order {
                    // Keep the full sweep for small fields, thin it for m=8.
                    if m == 8 && (i % 17 != 3 || j % 19 != 5) {
                        continue;
                    }
                    let lhs = gf_pow(p.alpha(), i + j, &p).unwrap();
                    let rhs = gf_mul(
                        gf_pow(p.alpha(), i, &p).unwrap(),
                        gf_pow(p.alpha(), j, &p).unwrap(),
                        &p,
                    );
                    assert_eq!(lhs, rhs, "m={m} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_for_small_degrees() {
        for m in 1..=4 {
            let p = make_field(m).unwrap();
            let n = 1u64 << m;
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(gf_mul(a, b, &p), gf_mul(b, a, &p));
                    for c in 0..n {
                        assert_eq!(
                            gf_mul(gf_mul(a, b, &p), c, &p),
                            gf_mul(a, gf_mul(b, c, &p), &p)
                        );
                        assert_eq!(
                            gf_mul(a, gf_add(b, c), &p),
                            gf_add(gf_mul(a, b, &p), gf_mul(a, c, &p))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn modulus_override_validation() {
        // Wrong degree.
        assert!(make_field_with_modulus(4, 0xB).is_err());
        assert!(make_field_with_modulus(4, 0x2B).is_err());
        // x^4 + 1 = (x + 1)^4 is reducible.
        assert!(make_field_with_modulus(4, 0x11).is_err());
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5 in it,
        // so the generator search must move past x.
        let p = make_field_with_modulus(4, 0x1F).unwrap();
        assert_eq!(element_order(2, &p), 5);
        assert_eq!(element_order(p.alpha(), &p), 15);
        // The standard modulus keeps alpha = x.
        let q = make_field_with_modulus(4, 0x13).unwrap();
        assert_eq!(q.alpha(), 2);
    }

    #[test]
    fn element_bits_layout() {
        let v = element_bits(0b1011, 4);
        assert_eq!(v.to_bit_string(), "1101");
        assert_eq!(v.ones(), vec![0, 1, 3]);
    }

    proptest! {
        #[test]
        fn mul_commutes_and_distributes(m in 1u32..=8, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let p = make_field(m).unwrap();
            let mask = (1u64 << m) - 1;
            let (a, b, c) = (a & mask, b & mask, c & mask);
            prop_assert_eq!(gf_mul(a, b, &p), gf_mul(b, a, &p));
            prop_assert_eq!(
                gf_mul(a, gf_add(b, c), &p),
                gf_add(gf_mul(a, b, &p), gf_mul(a, c, &p))
            );
        }
    }
}
