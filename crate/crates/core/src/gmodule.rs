//! Modules over a cyclic group `C_n`, given by the action of a chosen
//! generator, and the 2-periodic group, Tate, and group homology built from
//! the norm map.
//!
//! The distinguished generator is fixed once (the Frobenius in the K-theory
//! examples); the subgroup of order `m | n` is generated by `action^(n/m)`.

use crate::abelian::{check_divisor, express_through, AbMap, FgAb, Presentation};
use crate::error::{KrogError, Result};
use crate::matrix::Mat;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Factor `q` as a prime power; returns `(p, e)` with `q = p^e`, `e >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut m = q;
    let mut p = 0u64;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    if p == 0 {
        return Some((q, 1)); // q itself prime
    }
    let mut e = 0u32;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    if m == 1 {
        Some((p, e))
    } else {
        None
    }
}

pub fn is_prime(q: u64) -> bool {
    matches!(prime_power(q), Some((_, 1)))
}

/// An `FgAb` with an automorphism of order dividing `n`: the action of the
/// chosen generator of `C_n`.
#[derive(Clone, Debug)]
pub struct GModule {
    pub n: u32,
    pub group: FgAb,
    pub action: Mat,
}

/// Invariants, coinvariants, and the norm map for one subgroup, all against
/// normal-form presentations with distinguished generators.
pub struct SubgroupData {
    pub invariants: FgAb,
    /// invariants -> ambient module
    pub incl: AbMap,
    pub coinvariants: FgAb,
    /// ambient module -> coinvariants
    pub proj: AbMap,
    /// a set-theoretic section of `proj` on generators
    pub coinv_lift: Mat,
    /// coinvariants -> invariants
    pub norm: AbMap,
}

impl GModule {
    pub fn new(n: u32, group: FgAb, action: Mat) -> Result<Self> {
        assert!(n >= 1);
        let pres = group.presentation();
        let f = AbMap::new(pres.clone(), pres.clone(), action.clone());
        if !f.is_valid() {
            return Err(KrogError::Invalid(
                "action does not respect the relations".into(),
            ));
        }
        if !f.is_isomorphism() {
            return Err(KrogError::Invalid("action is not an automorphism".into()));
        }
        let powered = AbMap::new(pres.clone(), pres.clone(), action.pow(n));
        if !powered.eq_as_map(&AbMap::identity(&pres)) {
            return Err(KrogError::Invalid(format!(
                "action does not have order dividing n = {n}"
            )));
        }
        Ok(GModule { n, group, action })
    }

    /// The zero module.
    pub fn zero(n: u32) -> GModule {
        GModule {
            n,
            group: FgAb::trivial(),
            action: Mat::zero(0, 0),
        }
    }

    /// `Z` with the trivial action.
    pub fn trivial_z(n: u32) -> GModule {
        GModule {
            n,
            group: FgAb::free(1),
            action: Mat::identity(1),
        }
    }

    /// `Z^sigma`: the integers with the generator acting by -1. Requires even
    /// order, otherwise the sign is not an action of `C_n`.
    pub fn sign_z(n: u32) -> Result<GModule> {
        if n % 2 != 0 {
            return Err(KrogError::TwistNeedsEvenOrder(n));
        }
        Ok(GModule {
            n,
            group: FgAb::free(1),
            action: Mat::scalar(1, &BigInt::from(-1)),
        })
    }

    /// The K-theory coefficient module: `Z/(q^{ni} - 1)` with the generator
    /// acting by `q^i` (or `-q^i` when `twisted`).
    pub fn k_module(q: u64, n: u32, i: u32, twisted: bool) -> Result<GModule> {
        if prime_power(q).is_none() {
            return Err(KrogError::NotAPrimePower(q));
        }
        if i == 0 {
            return Err(KrogError::NonPositiveIndex(0));
        }
        let modulus = BigInt::from(q).pow(n * i) - 1;
        let group = FgAb::cyclic(&modulus);
        if group.is_trivial() {
            return Ok(GModule {
                n,
                group,
                action: Mat::zero(0, 0),
            });
        }
        let mut scalar = BigInt::from(q).pow(i);
        if twisted {
            scalar = -scalar;
        }
        // -q^i has multiplicative order 2n on Z/(q^{ni}-1) when n is odd and
        // the modulus exceeds 2, so there is no such C_n-module.
        if twisted && n % 2 == 1 && group.order() != Some(BigInt::from(2)) {
            return Err(KrogError::TwistNeedsEvenOrder(n));
        }
        let action = group.reduce_matrix(&Mat::scalar(1, &scalar));
        GModule::new(n, group, action)
    }

    fn pres(&self) -> Presentation {
        self.group.presentation()
    }

    /// First generator of the underlying presentation, when there is one.
    fn e1(&self) -> Option<Mat> {
        if self.group.gens() == 0 {
            return None;
        }
        Some(Mat::from_fn(self.group.gens(), 1, |i, _| {
            if i == 0 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }))
    }

    /// The full norm `sum_{j=0}^{m-1} action^(j n/m)` of the subgroup of
    /// order `m`, as a matrix on the ambient presentation.
    pub fn norm_matrix(&self, m: u32) -> Mat {
        let g = self.action.pow(self.n / m);
        let mut acc = Mat::zero(self.group.gens(), self.group.gens());
        let mut pw = Mat::identity(self.group.gens());
        for _ in 0..m {
            acc = acc.add(&pw);
            pw = pw.mul(&g);
        }
        acc
    }

    /// Invariants, coinvariants, and the norm for the subgroup of order `m`.
    pub fn subgroup_data(&self, m: u32) -> Result<SubgroupData> {
        check_divisor(m, self.n)?;
        let pres = self.pres();
        let g = self.action.pow(self.n / m);
        let t = g.sub(&Mat::identity(self.group.gens()));
        let f_t = AbMap::new(pres.clone(), pres.clone(), t);
        let norm_mat = self.norm_matrix(m);

        // Invariants: kernel of (g - 1). Prefer the class of e_1 when it is
        // already invariant, and the norm of e_1 otherwise; these are the
        // generators the Lewis diagrams are written against.
        let (ker_pres, incl0) = f_t.kernel();
        let preferred_inv = self.e1().and_then(|e1| {
            express_through(&incl0.matrix, &pres.rels, &e1)
                .or_else(|| express_through(&incl0.matrix, &pres.rels, &norm_mat.mul(&e1)))
        });
        let nf_inv = ker_pres.normal_form_with_preferred(preferred_inv.as_ref());
        let invariants = nf_inv.group;
        let incl = AbMap::new(
            invariants.presentation(),
            pres.clone(),
            self.group.reduce_matrix(&incl0.matrix.mul(&nf_inv.from_nf)),
        );

        // Coinvariants: cokernel of (g - 1), generated by the class of e_1.
        let coker_pres = Presentation::new(self.group.gens(), pres.rels.hstack(&f_t.matrix));
        let nf_co = coker_pres.normal_form_with_preferred(self.e1().as_ref());
        let coinvariants = nf_co.group;
        let proj = AbMap::new(
            pres.clone(),
            coinvariants.presentation(),
            coinvariants.reduce_matrix(&nf_co.to_nf),
        );
        let coinv_lift = nf_co.from_nf;

        // The norm descends to coinvariants and lands in invariants.
        let norm_on_gens = norm_mat.mul(&coinv_lift);
        let expressed = express_through(&incl.matrix, &pres.rels, &norm_on_gens)
            .expect("norm image must lie in the invariants");
        let norm = AbMap::new(
            coinvariants.presentation(),
            invariants.presentation(),
            invariants.reduce_matrix(&expressed),
        );
        assert!(norm.is_valid(), "norm map must be well-defined");

        Ok(SubgroupData {
            invariants,
            incl,
            coinvariants,
            proj,
            coinv_lift,
            norm,
        })
    }

    pub fn invariants(&self, m: u32) -> Result<(FgAb, AbMap)> {
        let d = self.subgroup_data(m)?;
        Ok((d.invariants, d.incl))
    }

    pub fn coinvariants(&self, m: u32) -> Result<(FgAb, AbMap)> {
        let d = self.subgroup_data(m)?;
        Ok((d.coinvariants, d.proj))
    }

    pub fn norm_map(&self, m: u32) -> Result<AbMap> {
        Ok(self.subgroup_data(m)?.norm)
    }

    /// `H^s(C_m; M)` by the 2-periodic closed form: invariants at 0, then
    /// kernel / cokernel of the norm in odd / even positive degrees.
    pub fn group_cohomology(&self, m: u32, s: i64) -> Result<FgAb> {
        if s < 0 {
            return Err(KrogError::NegativeDegree(s));
        }
        let data = self.subgroup_data(m)?;
        Ok(match s {
            0 => data.invariants,
            _ if s % 2 == 1 => data.norm.kernel_nf().0,
            _ => data.norm.cokernel_nf().0,
        })
    }

    /// `H_s(C_m; M)`: coinvariants at 0, then cokernel / kernel of the norm in
    /// odd / even positive degrees.
    pub fn group_homology(&self, m: u32, s: i64) -> Result<FgAb> {
        if s < 0 {
            return Err(KrogError::NegativeDegree(s));
        }
        let data = self.subgroup_data(m)?;
        Ok(match s {
            0 => data.coinvariants,
            _ if s % 2 == 1 => data.norm.cokernel_nf().0,
            _ => data.norm.kernel_nf().0,
        })
    }

    /// Tate cohomology, defined for every integer degree: kernel of the norm
    /// in odd degrees, cokernel in even degrees.
    pub fn tate_cohomology(&self, m: u32, s: i64) -> Result<FgAb> {
        let data = self.subgroup_data(m)?;
        Ok(if s.rem_euclid(2) == 1 {
            data.norm.kernel_nf().0
        } else {
            data.norm.cokernel_nf().0
        })
    }
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z8_action3() -> GModule {
        GModule::k_module(3, 2, 1, false).unwrap()
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(0), None);
    }

    #[test]
    fn k_module_f9() {
        let m = z8_action3();
        assert_eq!(m.group, FgAb::cyclic(&BigInt::from(8)));
        assert_eq!(m.action[(0, 0)], BigInt::from(3));
        let tw = GModule::k_module(3, 2, 1, true).unwrap();
        assert_eq!(tw.action[(0, 0)], BigInt::from(5)); // -3 mod 8
    }

    #[test]
    fn k_module_f2_is_trivial() {
        let m = GModule::k_module(2, 1, 1, false).unwrap();
        assert!(m.group.is_trivial());
    }

    #[test]
    fn k_module_rejects_bad_input() {
        assert!(GModule::k_module(6, 2, 1, false).is_err());
        assert!(GModule::k_module(1, 2, 1, false).is_err());
        assert!(GModule::k_module(3, 2, 0, false).is_err());
        assert!(GModule::k_module(3, 3, 1, true).is_err());
    }

    #[test]
    fn invariants_of_z8() {
        let m = z8_action3();
        let (inv, incl) = m.invariants(2).unwrap();
        assert_eq!(inv, FgAb::cyclic(&BigInt::from(2)));
        // generated by (q^2-1)/(q-1) = 4 in Z/8
        assert_eq!(incl.matrix[(0, 0)], BigInt::from(4));
        let (inv1, _) = m.invariants(1).unwrap();
        assert_eq!(inv1, FgAb::cyclic(&BigInt::from(8)));
    }

    #[test]
    fn invariants_of_sign_z() {
        let m = GModule::sign_z(2).unwrap();
        let (inv, _) = m.invariants(2).unwrap();
        assert!(inv.is_trivial());
        let (coinv, _) = m.coinvariants(2).unwrap();
        assert_eq!(coinv, FgAb::cyclic(&BigInt::from(2)));
    }

    #[test]
    fn invariants_of_trivial_z() {
        let m = GModule::trivial_z(4);
        for d in divisors(4) {
            assert_eq!(m.invariants(d).unwrap().0, FgAb::free(1));
            assert_eq!(m.coinvariants(d).unwrap().0, FgAb::free(1));
        }
        assert!(m.invariants(3).is_err());
    }

    #[test]
    fn coinvariants_of_z8() {
        let m = z8_action3();
        let (coinv, proj) = m.coinvariants(2).unwrap();
        assert_eq!(coinv, FgAb::cyclic(&BigInt::from(2)));
        assert_eq!(proj.matrix[(0, 0)], BigInt::one());
    }

    #[test]
    fn norm_maps() {
        // trivial Z over C_2: norm is multiplication by 2
        let m = GModule::trivial_z(2);
        let norm = m.norm_map(2).unwrap();
        assert_eq!(norm.matrix[(0, 0)], BigInt::from(2));

        // K_1(F_9): norm carries generator to generator
        let k = z8_action3();
        let norm = k.norm_map(2).unwrap();
        assert_eq!(norm.matrix[(0, 0)], BigInt::one());
        assert!(norm.is_isomorphism());

        // Z^sigma over C_2: the zero map Z/2 -> 0
        let s = GModule::sign_z(2).unwrap();
        let norm = s.norm_map(2).unwrap();
        assert!(norm.target.gens == 0);
        assert_eq!(norm.kernel_nf().0, FgAb::cyclic(&BigInt::from(2)));
    }

    #[test]
    fn cohomology_closed_forms() {
        let z = GModule::trivial_z(2);
        assert_eq!(z.group_cohomology(2, 2).unwrap(), FgAb::cyclic(&BigInt::from(2)));
        assert!(z.group_cohomology(2, 1).unwrap().is_trivial());
        assert_eq!(z.group_cohomology(2, 0).unwrap(), FgAb::free(1));
        assert!(z.group_cohomology(2, -1).is_err());

        let s = GModule::sign_z(2).unwrap();
        assert_eq!(s.group_cohomology(2, 1).unwrap(), FgAb::cyclic(&BigInt::from(2)));

        let k = z8_action3();
        for s_deg in 1..=4 {
            assert!(k.group_cohomology(2, s_deg).unwrap().is_trivial());
        }
    }

    #[test]
    fn tate_closed_forms() {
        let z = GModule::trivial_z(2);
        assert_eq!(z.tate_cohomology(2, 0).unwrap(), FgAb::cyclic(&BigInt::from(2)));
        assert!(z.tate_cohomology(2, -1).unwrap().is_trivial());
        let k = z8_action3();
        for s in -4..=4 {
            assert!(k.tate_cohomology(2, s).unwrap().is_trivial(), "s = {s}");
        }
    }

    #[test]
    fn homology_of_sign_z() {
        let s = GModule::sign_z(2).unwrap();
        assert_eq!(s.group_homology(2, 0).unwrap(), FgAb::cyclic(&BigInt::from(2)));
        // odd homology = cokernel of the norm = 0; even positive = kernel = Z/2
        assert!(s.group_homology(2, 1).unwrap().is_trivial());
        assert_eq!(s.group_homology(2, 2).unwrap(), FgAb::cyclic(&BigInt::from(2)));
    }
}
