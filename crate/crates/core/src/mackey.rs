//! Mackey functors for a cyclic group `C_n`.
//!
//! Levels are indexed by divisors `d | n`, where level `d` holds the value at
//! the orbit `C_n/C_d` (fixed points or orbits for the subgroup of order
//! `d`). For every pair `d | e` the functor stores a restriction
//! `R^e_d: L_e -> L_d` and a transfer `T^e_d: L_d -> L_e`, and each level
//! carries the action of the chosen generator of `C_n`; its class generates
//! the Weyl group `C_{n/d}` of the level.

use crate::abelian::{express_through, solve_mod, AbMap, FgAb};
use crate::error::{KrogError, Result};
use crate::gmodule::{divisors, GModule};
use crate::matrix::Mat;
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// How a Mackey functor was produced. The fixed-point functor is the right
/// adjoint to evaluation at the bottom level, so a functor tagged `ImageOfR`
/// admits the adjunction argument: any morphism out of a functor with trivial
/// bottom level into it is zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Provenance {
    ImageOfR,
    ImageOfL,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub group: FgAb,
    /// Action of the chosen generator of `C_n` on this level.
    pub weyl: Mat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MackeyFn {
    pub n: u32,
    pub levels: BTreeMap<u32, Level>,
    /// `(e, d)` with `d | e`, `d < e`: the restriction `L_e -> L_d`.
    pub restrictions: BTreeMap<(u32, u32), Mat>,
    /// `(e, d)` with `d | e`, `d < e`: the transfer `L_d -> L_e`.
    pub transfers: BTreeMap<(u32, u32), Mat>,
    pub provenance: Provenance,
}

impl MackeyFn {
    /// Assemble from raw parts. No axioms are checked; run
    /// [`MackeyFn::validate`] when the data is untrusted.
    pub fn from_parts(
        n: u32,
        levels: BTreeMap<u32, Level>,
        restrictions: BTreeMap<(u32, u32), Mat>,
        transfers: BTreeMap<(u32, u32), Mat>,
        provenance: Provenance,
    ) -> Self {
        MackeyFn {
            n,
            levels,
            restrictions,
            transfers,
            provenance,
        }
    }

    pub fn zero(n: u32) -> Self {
        let mut levels = BTreeMap::new();
        let mut restrictions = BTreeMap::new();
        let mut transfers = BTreeMap::new();
        for d in divisors(n) {
            levels.insert(
                d,
                Level {
                    group: FgAb::trivial(),
                    weyl: Mat::zero(0, 0),
                },
            );
            for e in divisors(n) {
                if e > d && e % d == 0 {
                    restrictions.insert((e, d), Mat::zero(0, 0));
                    transfers.insert((e, d), Mat::zero(0, 0));
                }
            }
        }
        MackeyFn::from_parts(n, levels, restrictions, transfers, Provenance::Other)
    }

    pub fn level(&self, d: u32) -> &Level {
        &self.levels[&d]
    }

    pub fn bottom(&self) -> &Level {
        self.level(1)
    }

    pub fn top(&self) -> &Level {
        self.level(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.levels.values().all(|l| l.group.is_trivial())
    }

    /// Restriction matrix `L_e -> L_d` (identity when `e == d`).
    pub fn res(&self, e: u32, d: u32) -> Mat {
        if e == d {
            Mat::identity(self.level(d).group.gens())
        } else {
            self.restrictions[&(e, d)].clone()
        }
    }

    /// Transfer matrix `L_d -> L_e` (identity when `e == d`).
    pub fn tr(&self, e: u32, d: u32) -> Mat {
        if e == d {
            Mat::identity(self.level(d).group.gens())
        } else {
            self.transfers[&(e, d)].clone()
        }
    }

    pub fn res_map(&self, e: u32, d: u32) -> AbMap {
        AbMap::new(
            self.level(e).group.presentation(),
            self.level(d).group.presentation(),
            self.res(e, d),
        )
    }

    pub fn tr_map(&self, e: u32, d: u32) -> AbMap {
        AbMap::new(
            self.level(d).group.presentation(),
            self.level(e).group.presentation(),
            self.tr(e, d),
        )
    }

    pub fn weyl_map(&self, d: u32) -> AbMap {
        let p = self.level(d).group.presentation();
        AbMap::new(p.clone(), p, self.level(d).weyl.clone())
    }

    /// Same levels and structure maps, compared as homomorphisms; provenance
    /// tags are ignored.
    pub fn same_diagram(&self, other: &MackeyFn) -> bool {
        if self.n != other.n {
            return false;
        }
        for d in divisors(self.n) {
            if self.level(d).group != other.level(d).group {
                return false;
            }
            if !self.weyl_map(d).eq_as_map(&other.weyl_map(d)) {
                return false;
            }
        }
        for (&(e, d), _) in &self.restrictions {
            if !self.res_map(e, d).eq_as_map(&other.res_map(e, d)) {
                return false;
            }
            if !self.tr_map(e, d).eq_as_map(&other.tr_map(e, d)) {
                return false;
            }
        }
        true
    }

    /// Check every axiom; an empty report means the functor is valid.
    pub fn validate(&self) -> Vec<AxiomViolation> {
        let mut out = Vec::new();
        let divs = divisors(self.n);
        for &d in &divs {
            let w = self.weyl_map(d);
            if !w.is_valid() || !w.is_isomorphism() {
                out.push(AxiomViolation::WeylNotAutomorphism { d });
                continue;
            }
            let pw = AbMap::new(w.source.clone(), w.target.clone(), w.matrix.pow(self.n / d));
            if !pw.eq_as_map(&AbMap::identity(&w.source)) {
                out.push(AxiomViolation::WeylOrder { d });
            }
        }
        for &e in &divs {
            for &d in &divs {
                if d >= e || e % d != 0 {
                    continue;
                }
                let r = self.res_map(e, d);
                let t = self.tr_map(e, d);
                if !r.is_valid() {
                    out.push(AxiomViolation::InvalidMap {
                        kind: "restriction",
                        upper: e,
                        lower: d,
                    });
                }
                if !t.is_valid() {
                    out.push(AxiomViolation::InvalidMap {
                        kind: "transfer",
                        upper: e,
                        lower: d,
                    });
                }
                if !r.compose(&self.weyl_map(e)).eq_as_map(&self.weyl_map(d).compose(&r)) {
                    out.push(AxiomViolation::WeylEquivariance {
                        kind: "restriction",
                        upper: e,
                        lower: d,
                    });
                }
                if !t.compose(&self.weyl_map(d)).eq_as_map(&self.weyl_map(e).compose(&t)) {
                    out.push(AxiomViolation::WeylEquivariance {
                        kind: "transfer",
                        upper: e,
                        lower: d,
                    });
                }
            }
        }
        // transitivity over chains d | e | f
        for &f in &divs {
            for &e in &divs {
                if e >= f || f % e != 0 {
                    continue;
                }
                for &d in &divs {
                    if d >= e || e % d != 0 {
                        continue;
                    }
                    let r_direct = self.res_map(f, d);
                    let r_through = self.res_map(e, d).compose(&self.res_map(f, e));
                    if !r_direct.eq_as_map(&r_through) {
                        out.push(AxiomViolation::Transitivity {
                            kind: "restriction",
                            d,
                            e,
                            f,
                        });
                    }
                    let t_direct = self.tr_map(f, d);
                    let t_through = self.tr_map(f, e).compose(&self.tr_map(e, d));
                    if !t_direct.eq_as_map(&t_through) {
                        out.push(AxiomViolation::Transitivity {
                            kind: "transfer",
                            d,
                            e,
                            f,
                        });
                    }
                }
            }
        }
        // double coset formula for d | f and e | f:
        //   R^f_e T^f_d = sum_j T^e_g a_g^{j n/f} R^d_g,  g = gcd(d, e),
        // the sum running over f*g/(d*e) Weyl translates.
        for &f in &divs {
            for &d in &divs {
                if f % d != 0 {
                    continue;
                }
                for &e in &divs {
                    if f % e != 0 {
                        continue;
                    }
                    let g = d.gcd(&e);
                    let count = f * g / (d * e);
                    let lhs = self.res_map(f, e).compose(&self.tr_map(f, d));
                    let mut acc: Option<AbMap> = None;
                    for j in 0..count {
                        let weyl_pow = AbMap::new(
                            self.level(g).group.presentation(),
                            self.level(g).group.presentation(),
                            self.level(g).weyl.pow(j * (self.n / f)),
                        );
                        let term = self
                            .tr_map(e, g)
                            .compose(&weyl_pow)
                            .compose(&self.res_map(d, g));
                        acc = Some(match acc {
                            None => term,
                            Some(a) => a.add(&term),
                        });
                    }
                    let rhs = acc.expect("count >= 1");
                    if !lhs.eq_as_map(&rhs) {
                        out.push(AxiomViolation::DoubleCoset { d, e, f });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    WeylNotAutomorphism { d: u32 },
    WeylOrder { d: u32 },
    InvalidMap { kind: &'static str, upper: u32, lower: u32 },
    WeylEquivariance { kind: &'static str, upper: u32, lower: u32 },
    Transitivity { kind: &'static str, d: u32, e: u32, f: u32 },
    DoubleCoset { d: u32, e: u32, f: u32 },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f0: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::WeylNotAutomorphism { d } => {
                write!(f0, "Weyl action at level {d} is not an automorphism")
            }
            AxiomViolation::WeylOrder { d } => {
                write!(f0, "Weyl action at level {d} does not have order dividing n/{d}")
            }
            AxiomViolation::InvalidMap { kind, upper, lower } => {
                write!(f0, "{kind} {upper}->{lower} does not respect relations")
            }
            AxiomViolation::WeylEquivariance { kind, upper, lower } => {
                write!(f0, "{kind} between levels {upper} and {lower} is not Weyl-equivariant")
            }
            AxiomViolation::Transitivity { kind, d, e, f } => {
                write!(f0, "{kind} transitivity fails for {d} | {e} | {f}")
            }
            AxiomViolation::DoubleCoset { d, e, f } => {
                write!(f0, "double coset formula fails at (d, e, f) = ({d}, {e}, {f})")
            }
        }
    }
}

/// A morphism of Mackey functors: one map per level, commuting with
/// restrictions, transfers, and Weyl actions.
#[derive(Clone, Debug)]
pub struct MackeyMor {
    pub source: MackeyFn,
    pub target: MackeyFn,
    pub maps: BTreeMap<u32, Mat>,
}

impl MackeyMor {
    pub fn map_at(&self, d: u32) -> AbMap {
        AbMap::new(
            self.source.level(d).group.presentation(),
            self.target.level(d).group.presentation(),
            self.maps[&d].clone(),
        )
    }

    pub fn identity(m: &MackeyFn) -> MackeyMor {
        let maps = divisors(m.n)
            .into_iter()
            .map(|d| (d, Mat::identity(m.level(d).group.gens())))
            .collect();
        MackeyMor {
            source: m.clone(),
            target: m.clone(),
            maps,
        }
    }

    pub fn compose(&self, other: &MackeyMor) -> MackeyMor {
        let maps = divisors(self.source.n)
            .into_iter()
            .map(|d| {
                let m = self
                    .target
                    .level(d)
                    .group
                    .reduce_matrix(&self.maps[&d].mul(&other.maps[&d]));
                (d, m)
            })
            .collect();
        MackeyMor {
            source: other.source.clone(),
            target: self.target.clone(),
            maps,
        }
    }

    /// Violated naturality conditions; empty means a genuine morphism.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.source.n;
        for d in divisors(n) {
            let f = self.map_at(d);
            if !f.is_valid() {
                out.push(format!("level {d} map does not respect relations"));
            }
            if !f
                .compose(&self.source.weyl_map(d))
                .eq_as_map(&self.target.weyl_map(d).compose(&f))
            {
                out.push(format!("level {d} map does not commute with the Weyl action"));
            }
        }
        for (&(e, d), _) in &self.source.restrictions {
            let fe = self.map_at(e);
            let fd = self.map_at(d);
            if !fd
                .compose(&self.source.res_map(e, d))
                .eq_as_map(&self.target.res_map(e, d).compose(&fe))
            {
                out.push(format!("does not commute with restriction {e}->{d}"));
            }
            if !fe
                .compose(&self.source.tr_map(e, d))
                .eq_as_map(&self.target.tr_map(e, d).compose(&fd))
            {
                out.push(format!("does not commute with transfer {d}->{e}"));
            }
        }
        out
    }

    pub fn is_isomorphism(&self) -> bool {
        divisors(self.source.n)
            .into_iter()
            .all(|d| self.map_at(d).is_isomorphism())
    }

    pub fn eq_as_morphism(&self, other: &MackeyMor) -> bool {
        divisors(self.source.n)
            .into_iter()
            .all(|d| self.map_at(d).eq_as_map(&other.map_at(d)))
    }
}

fn reduce_into(target: &FgAb, m: &Mat) -> Mat {
    target.reduce_matrix(m)
}

/// The fixed-point Mackey functor `R(M)`: level `d` is the invariants
/// `M^{C_d}`, restrictions are subgroup inclusions, transfers are norm sums.
pub fn fixed_point_mackey(m: &GModule) -> MackeyFn {
    build_norm_package(m).fixed
}

/// The orbit Mackey functor `L(M)`: level `d` is the coinvariants `M_{C_d}`,
/// transfers are projections, restrictions are norm sums.
pub fn orbit_mackey(m: &GModule) -> MackeyFn {
    build_norm_package(m).orbit
}

/// The norm transformation `L(M) -> R(M)` with its level-wise kernel and
/// cokernel Mackey functors.
pub struct NormPackage {
    pub orbit: MackeyFn,
    pub fixed: MackeyFn,
    pub morphism: MackeyMor,
    pub kernel: MackeyFn,
    pub cokernel: MackeyFn,
}

pub fn norm_mackey_morphism(m: &GModule) -> NormPackage {
    build_norm_package(m)
}

fn build_norm_package(m: &GModule) -> NormPackage {
    let n = m.n;
    let divs = divisors(n);
    let pres = m.group.presentation();
    let data: BTreeMap<u32, crate::gmodule::SubgroupData> = divs
        .iter()
        .map(|&d| (d, m.subgroup_data(d).expect("divisor")))
        .collect();

    let mut r_levels = BTreeMap::new();
    let mut l_levels = BTreeMap::new();
    for &d in &divs {
        let sd = &data[&d];
        // Weyl action of the generator, induced on invariants and coinvariants.
        let r_weyl = express_through(&sd.incl.matrix, &pres.rels, &m.action.mul(&sd.incl.matrix))
            .expect("action preserves invariants");
        let l_weyl = sd.proj.matrix.mul(&m.action.mul(&sd.coinv_lift));
        r_levels.insert(
            d,
            Level {
                group: sd.invariants.clone(),
                weyl: reduce_into(&sd.invariants, &r_weyl),
            },
        );
        l_levels.insert(
            d,
            Level {
                group: sd.coinvariants.clone(),
                weyl: reduce_into(&sd.coinvariants, &l_weyl),
            },
        );
    }

    let mut r_res = BTreeMap::new();
    let mut r_tr = BTreeMap::new();
    let mut l_res = BTreeMap::new();
    let mut l_tr = BTreeMap::new();
    for &e in &divs {
        for &d in &divs {
            if d >= e || e % d != 0 {
                continue;
            }
            let sd = &data[&d];
            let se = &data[&e];
            // sum over coset representatives of C_d in C_e
            let mut rel_norm = Mat::zero(m.group.gens(), m.group.gens());
            let step = m.action.pow(n / e);
            let mut pw = Mat::identity(m.group.gens());
            for _ in 0..(e / d) {
                rel_norm = rel_norm.add(&pw);
                pw = pw.mul(&step);
            }

            // R(M): restriction includes invariants, transfer is the norm sum.
            let res = express_through(&sd.incl.matrix, &pres.rels, &se.incl.matrix)
                .expect("invariants include into invariants of a smaller subgroup");
            r_res.insert((e, d), reduce_into(&sd.invariants, &res));
            let tr = express_through(&se.incl.matrix, &pres.rels, &rel_norm.mul(&sd.incl.matrix))
                .expect("relative norm lands in the invariants");
            r_tr.insert((e, d), reduce_into(&se.invariants, &tr));

            // L(M): transfer is the projection, restriction the norm sum.
            let tr_l = se.proj.matrix.mul(&sd.coinv_lift);
            l_tr.insert((e, d), reduce_into(&se.coinvariants, &tr_l));
            let res_l = sd.proj.matrix.mul(&rel_norm.mul(&se.coinv_lift));
            l_res.insert((e, d), reduce_into(&sd.coinvariants, &res_l));
        }
    }

    let fixed = MackeyFn::from_parts(n, r_levels, r_res, r_tr, Provenance::ImageOfR);
    let orbit = MackeyFn::from_parts(n, l_levels, l_res, l_tr, Provenance::ImageOfL);

    let norm_maps: BTreeMap<u32, Mat> = divs
        .iter()
        .map(|&d| (d, data[&d].norm.matrix.clone()))
        .collect();
    let morphism = MackeyMor {
        source: orbit.clone(),
        target: fixed.clone(),
        maps: norm_maps,
    };

    let kernel = sub_functor(&orbit, &divs, |d| morphism.map_at(d));
    let cokernel = quotient_functor(&fixed, &divs, |d| morphism.map_at(d));

    NormPackage {
        orbit,
        fixed,
        morphism,
        kernel,
        cokernel,
    }
}

/// The level-wise kernel of a morphism out of `amb`, with structure maps
/// obtained by restriction. Solvability is asserted: the kernel of a Mackey
/// morphism is again a Mackey functor.
fn sub_functor(amb: &MackeyFn, divs: &[u32], map_at: impl Fn(u32) -> AbMap) -> MackeyFn {
    let mut levels = BTreeMap::new();
    let mut incls = BTreeMap::new();
    for &d in divs {
        let (g, incl) = map_at(d).kernel_nf();
        levels.insert(
            d,
            Level {
                group: g,
                weyl: Mat::zero(0, 0), // filled below
            },
        );
        incls.insert(d, incl);
    }
    for &d in divs {
        let amb_rels = amb.level(d).group.presentation().rels;
        let w = express_through(
            &incls[&d].matrix,
            &amb_rels,
            &amb.level(d).weyl.mul(&incls[&d].matrix),
        )
        .expect("Weyl action preserves the kernel");
        let g = levels[&d].group.clone();
        levels.get_mut(&d).unwrap().weyl = reduce_into(&g, &w);
    }
    let mut restrictions = BTreeMap::new();
    let mut transfers = BTreeMap::new();
    for (&(e, d), _) in &amb.restrictions {
        let d_rels = amb.level(d).group.presentation().rels;
        let e_rels = amb.level(e).group.presentation().rels;
        let r = express_through(&incls[&d].matrix, &d_rels, &amb.res(e, d).mul(&incls[&e].matrix))
            .expect("restriction preserves the kernel");
        restrictions.insert((e, d), reduce_into(&levels[&d].group, &r));
        let t = express_through(&incls[&e].matrix, &e_rels, &amb.tr(e, d).mul(&incls[&d].matrix))
            .expect("transfer preserves the kernel");
        transfers.insert((e, d), reduce_into(&levels[&e].group, &t));
    }
    MackeyFn::from_parts(amb.n, levels, restrictions, transfers, Provenance::Other)
}

/// The level-wise cokernel of a morphism into `amb`, with induced structure
/// maps. Well-definedness is asserted rather than assumed.
fn quotient_functor(amb: &MackeyFn, divs: &[u32], map_at: impl Fn(u32) -> AbMap) -> MackeyFn {
    let mut levels = BTreeMap::new();
    let mut projs = BTreeMap::new();
    let mut lifts = BTreeMap::new();
    for &d in divs {
        let (g, proj, lift) = map_at(d).cokernel_nf_with_lift();
        levels.insert(
            d,
            Level {
                group: g,
                weyl: Mat::zero(0, 0),
            },
        );
        projs.insert(d, proj);
        lifts.insert(d, lift);
    }
    for &d in divs {
        let w = projs[&d].matrix.mul(&amb.level(d).weyl.mul(&lifts[&d]));
        let g = levels[&d].group.clone();
        let wm = reduce_into(&g, &w);
        let w_ab = AbMap::new(g.presentation(), g.presentation(), wm.clone());
        assert!(w_ab.is_valid(), "induced Weyl action must be well-defined");
        levels.get_mut(&d).unwrap().weyl = wm;
    }
    let mut restrictions = BTreeMap::new();
    let mut transfers = BTreeMap::new();
    for (&(e, d), _) in &amb.restrictions {
        let r = projs[&d].matrix.mul(&amb.res(e, d).mul(&lifts[&e]));
        let rm = reduce_into(&levels[&d].group, &r);
        let r_ab = AbMap::new(
            levels[&e].group.presentation(),
            levels[&d].group.presentation(),
            rm.clone(),
        );
        assert!(r_ab.is_valid(), "induced restriction must be well-defined");
        restrictions.insert((e, d), rm);
        let t = projs[&e].matrix.mul(&amb.tr(e, d).mul(&lifts[&d]));
        let tm = reduce_into(&levels[&e].group, &t);
        let t_ab = AbMap::new(
            levels[&d].group.presentation(),
            levels[&e].group.presentation(),
            tm.clone(),
        );
        assert!(t_ab.is_valid(), "induced transfer must be well-defined");
        transfers.insert((e, d), tm);
    }
    MackeyFn::from_parts(amb.n, levels, restrictions, transfers, Provenance::Other)
}

/// Certifies that every morphism `m -> t` is zero: true when `m` has trivial
/// bottom level and `t` is in the image of the fixed-point functor, by
/// adjunction. `false` means "cannot certify", not "a nonzero map exists".
pub fn hom_is_zero(m: &MackeyFn, t: &MackeyFn) -> bool {
    m.bottom().group.is_trivial() && t.provenance == Provenance::ImageOfR
}

/// A direct sum with the two canonical inclusions.
pub struct DirectSum {
    pub sum: MackeyFn,
    pub incl_first: MackeyMor,
    pub incl_second: MackeyMor,
}

pub fn direct_sum(x: &MackeyFn, y: &MackeyFn) -> DirectSum {
    assert_eq!(x.n, y.n);
    let n = x.n;
    let divs = divisors(n);
    let mut levels = BTreeMap::new();
    let mut to_nf = BTreeMap::new();
    let mut from_nf = BTreeMap::new();
    for &d in &divs {
        let pres = x
            .level(d)
            .group
            .presentation()
            .direct_sum(&y.level(d).group.presentation());
        let nf = pres.normal_form();
        let weyl = nf
            .to_nf
            .mul(&x.level(d).weyl.block_diag(&y.level(d).weyl).mul(&nf.from_nf));
        levels.insert(
            d,
            Level {
                group: nf.group.clone(),
                weyl: reduce_into(&nf.group, &weyl),
            },
        );
        to_nf.insert(d, nf.to_nf);
        from_nf.insert(d, nf.from_nf);
    }
    let mut restrictions = BTreeMap::new();
    let mut transfers = BTreeMap::new();
    for (&(e, d), _) in x.restrictions.iter().chain(y.restrictions.iter()) {
        if restrictions.contains_key(&(e, d)) {
            continue;
        }
        let r = to_nf[&d].mul(&x.res(e, d).block_diag(&y.res(e, d)).mul(&from_nf[&e]));
        restrictions.insert((e, d), reduce_into(&levels[&d].group, &r));
        let t = to_nf[&e].mul(&x.tr(e, d).block_diag(&y.tr(e, d)).mul(&from_nf[&d]));
        transfers.insert((e, d), reduce_into(&levels[&e].group, &t));
    }
    let provenance = if x.provenance == y.provenance {
        x.provenance
    } else {
        Provenance::Other
    };
    let sum = MackeyFn::from_parts(n, levels, restrictions, transfers, provenance);

    let block_incl = |first: bool| -> BTreeMap<u32, Mat> {
        divs.iter()
            .map(|&d| {
                let gx = x.level(d).group.gens();
                let gy = y.level(d).group.gens();
                let block = if first {
                    Mat::identity(gx).vstack(&Mat::zero(gy, gx))
                } else {
                    Mat::zero(gx, gy).vstack(&Mat::identity(gy))
                };
                (d, reduce_into(&sum.level(d).group, &to_nf[&d].mul(&block)))
            })
            .collect()
    };
    let incl_first = MackeyMor {
        source: x.clone(),
        target: sum.clone(),
        maps: block_incl(true),
    };
    let incl_second = MackeyMor {
        source: y.clone(),
        target: sum.clone(),
        maps: block_incl(false),
    };
    DirectSum {
        sum,
        incl_first,
        incl_second,
    }
}

pub fn direct_sum_of(parts: &[&MackeyFn], n: u32) -> MackeyFn {
    match parts {
        [] => MackeyFn::zero(n),
        [only] => (*only).clone(),
        [first, rest @ ..] => {
            let mut acc = (*first).clone();
            for p in rest {
                acc = direct_sum(&acc, p).sum;
            }
            acc
        }
    }
}

/// The retraction of a level-wise injective morphism `f: S -> P` that is an
/// isomorphism at the bottom level, where `S` is a fixed-point functor: the
/// bottom inverse extends uniquely over the restrictions, and the resulting
/// map satisfies `phi . f = id`. The construction only uses the bottom
/// inverse and the restriction maps; everything else is verified afterwards.
pub fn splitting_retraction(f: &MackeyMor) -> Result<MackeyMor> {
    let n = f.source.n;
    let bottom = f.map_at(1);
    if !bottom.is_isomorphism() {
        return Err(KrogError::NotBottomIso);
    }
    for d in divisors(n) {
        if !f.map_at(d).kernel_nf().0.is_trivial() {
            return Err(KrogError::NotInjective(d));
        }
    }
    let phi = bottom.inverse().expect("bottom isomorphism inverts");
    let s = &f.source;
    let p = &f.target;
    let mut maps = BTreeMap::new();
    maps.insert(1, phi.matrix.clone());
    let s1_rels = s.level(1).group.presentation().rels;
    for d in divisors(n) {
        if d == 1 {
            continue;
        }
        let desired = phi.matrix.mul(&p.res(d, 1));
        let lifted = solve_mod(&s.res(d, 1), &Mat::zero(0, 0), &s1_rels, &desired).ok_or_else(|| {
            KrogError::Invalid(format!(
                "retraction at level {d} does not factor through the restriction; \
                 the source is not a fixed-point functor"
            ))
        })?;
        maps.insert(d, s.level(d).group.reduce_matrix(&lifted));
    }
    let retraction = MackeyMor {
        source: p.clone(),
        target: s.clone(),
        maps,
    };
    let issues = retraction.validate();
    if !issues.is_empty() {
        return Err(KrogError::Invalid(format!(
            "retraction is not a Mackey morphism: {}",
            issues.join("; ")
        )));
    }
    let composite = retraction.compose(f);
    if !composite.eq_as_morphism(&MackeyMor::identity(s)) {
        return Err(KrogError::Invalid(
            "retraction does not restrict to the identity".into(),
        ));
    }
    Ok(retraction)
}
