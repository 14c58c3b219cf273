//! The RO(C_n) grading: virtual real representations, the orientation
//! character, and Quillen's K-groups of finite fields with the Frobenius
//! action.

use crate::abelian::FgAb;
use crate::error::{KrogError, Result};
use crate::gmodule::{prime_power, GModule};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// A virtual real orthogonal representation of `C_n`, as multiplicities of
/// the irreducibles: the trivial representation, the sign representation
/// (`n` even only), and the 2-dimensional rotations `lambda_j` for
/// `1 <= j <= floor((n-1)/2)`. Multiplicities may be negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VirtualRep {
    pub n: u32,
    pub a0: i64,
    pub a_sigma: i64,
    pub lambda: Vec<i64>,
}

fn lambda_count(n: u32) -> usize {
    ((n as usize).saturating_sub(1)) / 2
}

impl VirtualRep {
    pub fn new(n: u32, a0: i64, a_sigma: i64, lambda: Vec<i64>) -> Result<Self> {
        if n % 2 == 1 && a_sigma != 0 {
            return Err(KrogError::TwistNeedsEvenOrder(n));
        }
        if lambda.len() > lambda_count(n) {
            return Err(KrogError::Invalid(format!(
                "C_{n} has only {} rotation representations",
                lambda_count(n)
            )));
        }
        let mut lambda = lambda;
        lambda.resize(lambda_count(n), 0);
        Ok(VirtualRep { n, a0, a_sigma, lambda })
    }

    /// `d` copies of the trivial representation.
    pub fn trivial(n: u32, d: i64) -> Self {
        VirtualRep {
            n,
            a0: d,
            a_sigma: 0,
            lambda: vec![0; lambda_count(n)],
        }
    }

    pub fn sigma(n: u32) -> Result<Self> {
        VirtualRep::new(n, 0, 1, Vec::new())
    }

    /// Total (virtual) dimension `a0 + a_sigma + 2 sum a_j`.
    pub fn dim(&self) -> i64 {
        self.a0 + self.a_sigma + 2 * self.lambda.iter().sum::<i64>()
    }

    /// Dimension of the fixed points of the full group: only the trivial
    /// summands survive.
    pub fn fixed_dim(&self) -> i64 {
        self.a0
    }

    pub fn add(&self, other: &VirtualRep) -> VirtualRep {
        assert_eq!(self.n, other.n);
        VirtualRep {
            n: self.n,
            a0: self.a0 + other.a0,
            a_sigma: self.a_sigma + other.a_sigma,
            lambda: self
                .lambda
                .iter()
                .zip(&other.lambda)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Orientation of the action on the representation sphere: rotations and
    /// trivial summands preserve orientation, each sign summand reverses it.
    pub fn orientation(&self) -> Orientation {
        if self.a_sigma % 2 == 0 {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }

    /// Motivic bidegree for `n = 2`: `(x, y)` with `V = (x - y) + y sigma`.
    pub fn bidegree(&self) -> Option<Bidegree> {
        if self.n != 2 {
            return None;
        }
        Some(Bidegree {
            x: self.a0 + self.a_sigma,
            y: self.a_sigma,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn is_reversing(self) -> bool {
        self == Orientation::Reversing
    }

    /// Parity sum: the orientation character is a homomorphism to Z/2.
    pub fn compose(self, other: Orientation) -> Orientation {
        if self == other {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }
}

/// The motivic bidegree `(x, y)` over `C_2`, standing for the virtual
/// representation `(x - y) + y sigma`; `x` is the total degree, `y` the
/// twisted degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub x: i64,
    pub y: i64,
}

impl Bidegree {
    pub fn new(x: i64, y: i64) -> Self {
        Bidegree { x, y }
    }

    pub fn rep(&self) -> VirtualRep {
        VirtualRep {
            n: 2,
            a0: self.x - self.y,
            a_sigma: self.y,
            lambda: Vec::new(),
        }
    }

    pub fn add(&self, other: &Bidegree) -> Bidegree {
        Bidegree::new(self.x + other.x, self.y + other.y)
    }

    pub fn orientation(&self) -> Orientation {
        self.rep().orientation()
    }
}

/// Quillen's K-groups of `F_q`: `Z` in degree 0, `Z/(q^i - 1)` in degree
/// `2i - 1`, zero in positive even degrees.
pub fn quillen_k(q: u64, d: i64) -> Result<FgAb> {
    if prime_power(q).is_none() {
        return Err(KrogError::NotAPrimePower(q));
    }
    if d < 0 {
        return Err(KrogError::NegativeDegree(d));
    }
    if d == 0 {
        return Ok(FgAb::free(1));
    }
    if d % 2 == 0 {
        return Ok(FgAb::trivial());
    }
    let i = ((d + 1) / 2) as u32;
    Ok(FgAb::cyclic(&(BigInt::from(q).pow(i) - 1)))
}

/// The underlying `C_n`-module of the V-th homotopy of the K-theory spectrum
/// of `F_{q^n}`, which depends only on the total dimension and the
/// orientation of `V`: `Z` or `Z^sigma` in dimension 0, the (possibly
/// twisted) K-group in positive odd dimension, zero otherwise.
pub fn underlying_k_module(q: u64, n: u32, v: &VirtualRep) -> Result<GModule> {
    underlying_k_module_dim(q, n, v.dim(), v.orientation())
}

pub fn underlying_k_module_dim(
    q: u64,
    n: u32,
    dim: i64,
    orientation: Orientation,
) -> Result<GModule> {
    if prime_power(q).is_none() {
        return Err(KrogError::NotAPrimePower(q));
    }
    let reversing = orientation.is_reversing();
    match dim {
        0 if !reversing => Ok(GModule::trivial_z(n)),
        0 => GModule::sign_z(n),
        d if d > 0 && d % 2 == 1 => GModule::k_module(q, n, ((d + 1) / 2) as u32, reversing),
        _ => Ok(GModule::zero(n)),
    }
}

/// The underlying module for the integral Eilenberg-MacLane spectrum:
/// concentrated in dimension zero.
pub fn underlying_hz_module_dim(n: u32, dim: i64, orientation: Orientation) -> Result<GModule> {
    match (dim, orientation.is_reversing()) {
        (0, false) => Ok(GModule::trivial_z(n)),
        (0, true) => GModule::sign_z(n),
        _ => Ok(GModule::zero(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn orientation_cases() {
        let sigma = VirtualRep::sigma(2).unwrap();
        assert_eq!(sigma.orientation(), Orientation::Reversing);
        let two_sigma = sigma.add(&sigma);
        assert_eq!(two_sigma.orientation(), Orientation::Preserving);
        // odd-order cyclic groups only have orientation-preserving reps
        let lam = VirtualRep::new(3, 0, 0, vec![1]).unwrap();
        assert_eq!(lam.orientation(), Orientation::Preserving);
        assert_eq!(lam.dim(), 2);
        assert!(VirtualRep::new(3, 0, 1, vec![]).is_err());
    }

    #[test]
    fn orientation_is_additive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let v = VirtualRep::new(
                4,
                rng.gen_range(-5..5),
                rng.gen_range(-5..5),
                vec![rng.gen_range(-5..5)],
            )
            .unwrap();
            let w = VirtualRep::new(
                4,
                rng.gen_range(-5..5),
                rng.gen_range(-5..5),
                vec![rng.gen_range(-5..5)],
            )
            .unwrap();
            assert_eq!(
                v.add(&w).orientation(),
                v.orientation().compose(w.orientation())
            );
            assert_eq!(v.add(&w).dim(), v.dim() + w.dim());
        }
    }

    #[test]
    fn quillen_values() {
        assert_eq!(quillen_k(3, 1).unwrap(), FgAb::cyclic(&BigInt::from(2)));
        assert!(quillen_k(4, 2).unwrap().is_trivial());
        assert_eq!(quillen_k(2, 0).unwrap(), FgAb::free(1));
        assert_eq!(quillen_k(9, 3).unwrap(), FgAb::cyclic(&BigInt::from(80)));
        assert!(quillen_k(3, -1).is_err());
        assert!(quillen_k(6, 1).is_err());
    }

    #[test]
    fn underlying_modules() {
        // bidegree (1,0): K_1 of the quadratic extension of F_3
        let v = Bidegree::new(1, 0).rep();
        let m = underlying_k_module(3, 2, &v).unwrap();
        assert_eq!(m.group, FgAb::cyclic(&BigInt::from(8)));
        assert_eq!(m.action[(0, 0)], BigInt::from(3));
        // bidegree (1,1): the twisted action -3 = 5 mod 8
        let v = Bidegree::new(1, 1).rep();
        let m = underlying_k_module(3, 2, &v).unwrap();
        assert_eq!(m.action[(0, 0)], BigInt::from(5));
        // bidegree (0,1): the sign module
        let v = Bidegree::new(0, 1).rep();
        let m = underlying_k_module(3, 2, &v).unwrap();
        assert_eq!(m.group, FgAb::free(1));
        assert_eq!(m.action[(0, 0)], BigInt::from(-1));
        // even positive dimension: zero
        let v = Bidegree::new(2, 0).rep();
        assert!(underlying_k_module(3, 2, &v).unwrap().group.is_trivial());
    }

    #[test]
    fn bidegree_roundtrip() {
        let b = Bidegree::new(3, -2);
        assert_eq!(b.rep().bidegree(), Some(b));
        assert_eq!(b.rep().dim(), 3);
    }
}
