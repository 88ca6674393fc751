//! Exact integer-level construction of the polynomial families under study:
//! Rudin-Shapiro pairs, Fekete polynomials with Legendre-symbol coefficients,
//! and general sign polynomials. No floating point enters this layer.

use crate::error::{Error, Result};

/// Generation cap for the Rudin-Shapiro recursion: 2^22 coefficients (4M)
/// keeps every coefficient array comfortably in memory.
pub const DEFAULT_K_MAX: u32 = 22;

/// Degree-capped polynomial with coefficients restricted to {-1, 0, +1},
/// stored in ascending order (`coeffs[j]` multiplies z^j). The vector is
/// trimmed so the last entry is nonzero; a Littlewood polynomial additionally
/// has no zero entries.
#[derive(Clone, PartialEq, Eq)]
pub struct SignedPoly {
    coeffs: Vec<i8>,
}

impl std::fmt::Debug for SignedPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.len() <= 16 {
            write!(f, "SignedPoly({:?})", self.coeffs)
        } else {
            write!(f, "SignedPoly(degree {})", self.degree())
        }
    }
}

impl SignedPoly {
    /// Build from coefficients, validating the {-1, 0, +1} restriction and
    /// trimming trailing zeros. The zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<i8>) -> Result<Self> {
        if coeffs.iter().any(|&c| c < -1 || c > 1) {
            return Err(Error::Domain(
                "coefficients must lie in {-1, 0, +1}".into(),
            ));
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::Domain("zero polynomial".into()));
        }
        Ok(SignedPoly { coeffs })
    }

    /// Coefficients in ascending order; the last entry is nonzero.
    pub fn coeffs(&self) -> &[i8] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Littlewood polynomials have every coefficient in {-1, +1}.
    pub fn is_littlewood(&self) -> bool {
        self.coeffs.iter().all(|&c| c != 0)
    }

    /// Exact sum of squared coefficients (the squared L2 norm of the
    /// coefficient vector; equals n for a Littlewood polynomial of length n).
    pub fn coeff_square_sum(&self) -> i64 {
        self.coeffs.iter().map(|&c| (c as i64) * (c as i64)).sum()
    }

    /// Exact evaluation at an integer point (used for deflation decisions).
    pub fn eval_int(&self, x: i64) -> i64 {
        let mut acc = 0i64;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c as i64;
        }
        acc
    }

    /// Number of leading zero coefficients, i.e. the multiplicity of the
    /// root at the origin.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|&&c| c == 0).count()
    }

    /// Divide out z^m exactly.
    pub fn deflate_origin(&self) -> (SignedPoly, usize) {
        let m = self.zero_root_multiplicity();
        (
            SignedPoly {
                coeffs: self.coeffs[m..].to_vec(),
            },
            m,
        )
    }

    /// Substitute z -> -z (flips the sign of odd coefficients).
    pub fn alternate(&self) -> SignedPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| if j % 2 == 1 { -c } else { c })
            .collect();
        SignedPoly { coeffs }
    }
}

/// Conjugate-reciprocal transform f*(z) = z^deg f(1/z); for the real
/// coefficients used here this is coefficient reversal (with trailing-zero
/// trim, so it is an involution exactly when the constant term is nonzero).
pub fn conjugate_reciprocal(f: &SignedPoly) -> SignedPoly {
    let mut coeffs: Vec<i8> = f.coeffs.iter().rev().copied().collect();
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    SignedPoly { coeffs }
}

/// One generation of the recursion
/// P_{k+1} = P_k + z^{2^k} Q_k,  Q_{k+1} = P_k - z^{2^k} Q_k.
#[derive(Clone, Debug)]
pub struct RudinShapiroPair {
    pub k: u32,
    /// n = 2^k; both members have degree n - 1.
    pub n: usize,
    pub p: SignedPoly,
    pub q: SignedPoly,
}

/// Build the generation-k Rudin-Shapiro pair with the default capacity cap.
pub fn rudin_shapiro(k: u32) -> Result<RudinShapiroPair> {
    rudin_shapiro_with_cap(k, DEFAULT_K_MAX)
}

/// Build the generation-k pair under an explicit capacity cap.
pub fn rudin_shapiro_with_cap(k: u32, k_max: u32) -> Result<RudinShapiroPair> {
    if k > k_max {
        return Err(Error::Capacity {
            what: "rudin-shapiro generation k",
            requested: k as usize,
            max: k_max as usize,
        });
    }
    let n = 1usize << k;
    let mut p: Vec<i8> = Vec::with_capacity(n);
    let mut q: Vec<i8> = Vec::with_capacity(n);
    p.push(1);
    q.push(1);
    for _ in 0..k {
        let half = p.len();
        let mut np = Vec::with_capacity(2 * half);
        let mut nq = Vec::with_capacity(2 * half);
        np.extend_from_slice(&p);
        np.extend_from_slice(&q);
        nq.extend_from_slice(&p);
        nq.extend(q.iter().map(|&c| -c));
        p = np;
        q = nq;
    }
    Ok(RudinShapiroPair {
        k,
        n,
        p: SignedPoly { coeffs: p },
        q: SignedPoly { coeffs: q },
    })
}

/// Legendre symbol (j | p) for an odd prime p, by the Euler criterion
/// j^((p-1)/2) mod p. Primality of p is the caller's responsibility
/// (`fekete` checks it); oddness and p >= 3 are enforced here.
pub fn legendre_symbol(j: i64, p: u64) -> Result<i8> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::NotOddPrime(p));
    }
    let pm = p as i64;
    let jm = ((j % pm) + pm) % pm;
    if jm == 0 {
        return Ok(0);
    }
    let e = pow_mod(jm as u64, (p - 1) / 2, p);
    if e == 1 {
        Ok(1)
    } else if e == p - 1 {
        Ok(-1)
    } else {
        // impossible for prime p; reachable only on composite input
        Err(Error::NotOddPrime(p))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64. The first twelve primes as witness
/// bases decide primality correctly for all inputs below 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Reciprocity class of a Fekete polynomial under the transform
/// z^p f(1/z): self-reciprocal when p = 1 (mod 4), anti when p = 3 (mod 4).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reciprocity {
    SelfReciprocal,
    AntiSelfReciprocal,
}

impl Reciprocity {
    pub fn sign(self) -> i8 {
        match self {
            Reciprocity::SelfReciprocal => 1,
            Reciprocity::AntiSelfReciprocal => -1,
        }
    }
}

/// Fekete polynomial f_p(z) = sum_j (j|p) z^j of degree p-1 with zero
/// constant term.
#[derive(Clone, Debug)]
pub struct FeketePoly {
    pub p: u64,
    pub poly: SignedPoly,
    pub reciprocity: Reciprocity,
}

/// Construct the Fekete polynomial for an odd prime p. The Legendre symbols
/// are produced by a residue sieve (squares mod p) which doubles as an
/// exhaustive cross-check of the Euler-criterion route.
pub fn fekete(p: u64) -> Result<FeketePoly> {
    if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(p));
    }
    let pu = p as usize;
    let mut coeffs = vec![-1i8; pu];
    coeffs[0] = 0;
    let mut j = 1u64;
    while j <= p / 2 {
        coeffs[mul_mod(j, j, p) as usize] = 1;
        j += 1;
    }
    let reciprocity = if p % 4 == 1 {
        Reciprocity::SelfReciprocal
    } else {
        Reciprocity::AntiSelfReciprocal
    };
    Ok(FeketePoly {
        p,
        poly: SignedPoly { coeffs },
        reciprocity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rudin_shapiro_base_cases() {
        let g0 = rudin_shapiro(0).unwrap();
        assert_eq!(g0.p.coeffs(), &[1]);
        assert_eq!(g0.q.coeffs(), &[1]);

        let g1 = rudin_shapiro(1).unwrap();
        assert_eq!(g1.p.coeffs(), &[1, 1]);
        assert_eq!(g1.q.coeffs(), &[1, -1]);

        // hand-unrolled from k=1
        let g2 = rudin_shapiro(2).unwrap();
        assert_eq!(g2.p.coeffs(), &[1, 1, 1, -1]);
        assert_eq!(g2.q.coeffs(), &[1, 1, -1, 1]);
    }

    #[test]
    fn rudin_shapiro_halves_and_signs() {
        for k in 1..=14u32 {
            let g = rudin_shapiro(k).unwrap();
            let n = g.n;
            assert_eq!(g.p.len(), n);
            assert_eq!(g.q.len(), n);
            assert!(g.p.is_littlewood() && g.q.is_littlewood());
            let (pa, pb) = g.p.coeffs().split_at(n / 2);
            let (qa, qb) = g.q.coeffs().split_at(n / 2);
            assert_eq!(pa, qa, "first halves agree at k={k}");
            assert!(
                pb.iter().zip(qb).all(|(&a, &b)| a == -b),
                "second halves are negatives at k={k}"
            );
        }
    }

    #[test]
    fn rudin_shapiro_capacity_error() {
        assert!(matches!(
            rudin_shapiro_with_cap(7, 6),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn legendre_symbol_examples() {
        assert_eq!(legendre_symbol(0, 5).unwrap(), 0);
        for p in [3u64, 5, 7, 11, 101, 1009] {
            assert_eq!(legendre_symbol(1, p).unwrap(), 1);
        }
        // squares mod 7 are {1, 2, 4}
        assert_eq!(legendre_symbol(3, 7).unwrap(), -1);
        assert_eq!(legendre_symbol(4, 7).unwrap(), 1);
        // negative and out-of-range inputs reduce mod p
        assert_eq!(legendre_symbol(-4, 7).unwrap(), legendre_symbol(3, 7).unwrap());
        assert_eq!(legendre_symbol(10, 7).unwrap(), legendre_symbol(3, 7).unwrap());
    }

    #[test]
    fn legendre_symbol_rejects_even_or_small() {
        assert!(legendre_symbol(1, 2).is_err());
        assert!(legendre_symbol(1, 1).is_err());
        assert!(legendre_symbol(1, 10).is_err());
    }

    #[test]
    fn legendre_matches_exhaustive_squares() {
        for p in [3u64, 5, 7, 11, 13, 17, 97, 101] {
            let mut squares = std::collections::HashSet::new();
            for x in 1..p {
                squares.insert((x * x) % p);
            }
            for j in 0..p {
                let expect = if j == 0 {
                    0
                } else if squares.contains(&j) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_symbol(j as i64, p).unwrap(), expect, "({j}|{p})");
            }
        }
    }

    #[test]
    fn fekete_small_primes() {
        assert_eq!(fekete(3).unwrap().poly.coeffs(), &[0, 1, -1]);
        assert_eq!(fekete(5).unwrap().poly.coeffs(), &[0, 1, -1, -1, 1]);
        assert_eq!(fekete(7).unwrap().poly.coeffs(), &[0, 1, 1, -1, 1, -1, -1]);
    }

    #[test]
    fn fekete_rejects_composite_and_even() {
        assert!(fekete(9).is_err());
        assert!(fekete(4).is_err());
        assert!(fekete(1).is_err());
        assert!(fekete(2).is_err());
    }

    #[test]
    fn fekete_sign_balance_and_reciprocity() {
        let mut p = 3u64;
        while p <= 10_000 {
            if is_prime_u64(p) {
                let f = fekete(p).unwrap();
                let c = f.poly.coeffs();
                let plus = c.iter().filter(|&&x| x == 1).count();
                let minus = c.iter().filter(|&&x| x == -1).count();
                assert_eq!(plus as u64, (p - 1) / 2, "p={p}");
                assert_eq!(minus as u64, (p - 1) / 2, "p={p}");
                assert_eq!(c[0], 0);
                // reversal symmetry with sign (-1|p): c[p-j] = sign * c[j]
                let sign = f.reciprocity.sign();
                for j in 1..p as usize {
                    assert_eq!(c[p as usize - j], sign * c[j], "p={p} j={j}");
                }
            }
            p += 2;
        }
    }

    #[test]
    fn conjugate_reciprocal_examples() {
        let f = SignedPoly::new(vec![1, 1]).unwrap();
        assert_eq!(conjugate_reciprocal(&f).coeffs(), &[1, 1]);

        let p2 = rudin_shapiro(2).unwrap().p;
        assert_eq!(conjugate_reciprocal(&p2).coeffs(), &[-1, 1, 1, 1]);

        // fekete(5) reversed equals itself up to the (-1|5) = +1 sign,
        // after removing the z factor
        let f5 = fekete(5).unwrap().poly;
        let (g, m) = f5.deflate_origin();
        assert_eq!(m, 1);
        assert_eq!(conjugate_reciprocal(&g), g);
    }

    #[test]
    fn miller_rabin_against_sieve() {
        let mut sieve = vec![true; 20_000];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..sieve.len() {
            if sieve[i] {
                let mut j = i * i;
                while j < sieve.len() {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        for n in 0..sieve.len() {
            assert_eq!(is_prime_u64(n as u64), sieve[n], "n={n}");
        }
        // a few larger known values
        assert!(is_prime_u64(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime_u64(2_147_483_649));
        assert!(is_prime_u64(1_000_000_007));
    }

    proptest! {
        #[test]
        fn conjugate_reciprocal_involution(coeffs in proptest::collection::vec(-1i8..=1, 1..64)) {
            // involution holds whenever constant and leading terms are nonzero
            prop_assume!(coeffs.first() != Some(&0) && coeffs.last() != Some(&0));
            let f = SignedPoly::new(coeffs).unwrap();
            let g = conjugate_reciprocal(&conjugate_reciprocal(&f));
            prop_assert_eq!(f, g);
        }

        #[test]
        fn alternate_is_involution(coeffs in proptest::collection::vec(-1i8..=1, 1..64)) {
            prop_assume!(coeffs.last() != Some(&0));
            let f = SignedPoly::new(coeffs).unwrap();
            prop_assert_eq!(f.alternate().alternate(), f);
        }
    }
}
