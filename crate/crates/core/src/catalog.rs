//! The catalog of named `C_n`-Mackey functors built from `Z`, `Z^sigma`, and
//! the K-groups of finite fields with (twisted) Frobenius action.
//!
//! Every constructor builds the functor through the orbit/fixed-point
//! machinery and then checks it against the closed-form Lewis diagram, so a
//! drift in either route fails loudly.

use crate::abelian::FgAb;
use crate::error::{KrogError, Result};
use crate::gmodule::{divisors, GModule};
use crate::mackey::{
    fixed_point_mackey, norm_mackey_morphism, orbit_mackey, Level, MackeyFn, Provenance,
};
use crate::matrix::Mat;
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// The named Mackey functors of the catalog. The index on `Ominus`/`Oplus`
/// is the K-theory degree parameter `i` (degree `2i - 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Box,
    BoxSlash,
    Circle,
    BarBox,
    BarBoxSlash,
    BarCircle,
    Bullet,
    Ominus(u32),
    Oplus(u32),
}

impl Symbol {
    /// ASCII name accepted on the command line.
    pub fn name(&self) -> String {
        match self {
            Symbol::Box => "box".into(),
            Symbol::BoxSlash => "boxslash".into(),
            Symbol::Circle => "circle".into(),
            Symbol::BarBox => "barbox".into(),
            Symbol::BarBoxSlash => "barboxslash".into(),
            Symbol::BarCircle => "barcircle".into(),
            Symbol::Bullet => "bullet".into(),
            Symbol::Ominus(i) => format!("ominus^{i}"),
            Symbol::Oplus(i) => format!("oplus^{i}"),
        }
    }

    /// Display glyph matching the usual notation.
    pub fn glyph(&self) -> String {
        match self {
            Symbol::Box => "\u{25a1}".into(),          // white square
            Symbol::BoxSlash => "\u{229e}".into(),     // squared plus
            Symbol::Circle => "\u{25cb}".into(),       // white circle
            Symbol::BarBox => "\u{25a1}\u{0304}".into(),
            Symbol::BarBoxSlash => "\u{229e}\u{0304}".into(),
            Symbol::BarCircle => "\u{25cb}\u{0304}".into(),
            Symbol::Bullet => "\u{2022}".into(),
            Symbol::Ominus(i) => format!("\u{2296}^{i}"),
            Symbol::Oplus(i) => format!("\u{2295}^{i}"),
        }
    }

    pub fn tex(&self) -> String {
        match self {
            Symbol::Box => r"\square".into(),
            Symbol::BoxSlash => r"\boxslash".into(),
            Symbol::Circle => r"\circ".into(),
            Symbol::BarBox => r"\overline\square".into(),
            Symbol::BarBoxSlash => r"\overline\boxslash".into(),
            Symbol::BarCircle => r"\overline\circ".into(),
            Symbol::Bullet => r"\bullet".into(),
            Symbol::Ominus(i) => format!(r"\varominus^{{{i}}}"),
            Symbol::Oplus(i) => format!(r"\varoplus^{{{i}}}"),
        }
    }

    /// Parse a CLI name: `box`, `ominus` (needs `index`), or `ominus^3`.
    pub fn parse(name: &str, index: Option<u32>) -> Result<Symbol> {
        let (base, inline_idx) = match name.split_once('^') {
            Some((b, i)) => (
                b,
                Some(i.parse::<u32>().map_err(|_| KrogError::UnknownSymbol(name.into()))?),
            ),
            None => (name, None),
        };
        let idx = inline_idx.or(index);
        match base {
            "box" => Ok(Symbol::Box),
            "boxslash" => Ok(Symbol::BoxSlash),
            "circle" => Ok(Symbol::Circle),
            "barbox" => Ok(Symbol::BarBox),
            "barboxslash" => Ok(Symbol::BarBoxSlash),
            "barcircle" => Ok(Symbol::BarCircle),
            "bullet" => Ok(Symbol::Bullet),
            "ominus" => Ok(Symbol::Ominus(idx.unwrap_or(1))),
            "oplus" => Ok(Symbol::Oplus(idx.unwrap_or(1))),
            _ => Err(KrogError::UnknownSymbol(name.into())),
        }
    }

    pub fn needs_even_order(&self) -> bool {
        matches!(
            self,
            Symbol::BarBox | Symbol::BarBoxSlash | Symbol::BarCircle | Symbol::Bullet | Symbol::Oplus(_)
        )
    }

    /// Build the Mackey functor for the group `C_n` over the base field `F_q`
    /// (the field only matters for the K-theory symbols).
    pub fn realize(&self, q: u64, n: u32) -> Result<MackeyFn> {
        named(*self, q, n)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.glyph())
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        Symbol::parse(&raw, None).map_err(serde::de::Error::custom)
    }
}

/// Construct a named functor and check it against its closed-form diagram.
pub fn named(symbol: Symbol, q: u64, n: u32) -> Result<MackeyFn> {
    if symbol.needs_even_order() && n % 2 != 0 {
        return Err(KrogError::SymbolNeedsEvenOrder(symbol.name(), n));
    }
    let built = match symbol {
        Symbol::Box => fixed_point_mackey(&GModule::trivial_z(n)),
        Symbol::BoxSlash => orbit_mackey(&GModule::trivial_z(n)),
        Symbol::Circle => norm_mackey_morphism(&GModule::trivial_z(n)).cokernel,
        Symbol::BarBox => fixed_point_mackey(&GModule::sign_z(n)?),
        Symbol::BarBoxSlash => orbit_mackey(&GModule::sign_z(n)?),
        Symbol::BarCircle => norm_mackey_morphism(&GModule::sign_z(n)?).cokernel,
        Symbol::Bullet => norm_mackey_morphism(&GModule::sign_z(n)?).kernel,
        Symbol::Ominus(i) => {
            let m = GModule::k_module(q, n, i, false)?;
            let pkg = norm_mackey_morphism(&m);
            // the norm is an isomorphism, so the functor is in the image of
            // the fixed-point functor; that certificate is what the collapse
            // arguments use
            assert!(pkg.morphism.is_isomorphism(), "norm of an untwisted K-module must be an isomorphism");
            pkg.fixed
        }
        Symbol::Oplus(i) => {
            let m = GModule::k_module(q, n, i, true)?;
            let pkg = norm_mackey_morphism(&m);
            assert!(pkg.morphism.is_isomorphism(), "norm of a twisted K-module must be an isomorphism");
            pkg.fixed
        }
    };
    let expected = closed_form(symbol, q, n)?;
    assert!(
        built.same_diagram(&expected),
        "constructor for {} over C_{n} (q = {q}) disagrees with its closed-form Lewis diagram",
        symbol.name()
    );
    Ok(built)
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// The closed-form Lewis diagram of each catalog functor, assembled directly
/// from the published level formulas.
pub fn closed_form(symbol: Symbol, q: u64, n: u32) -> Result<MackeyFn> {
    let divs = divisors(n);
    // level group, weyl scalar, and for each pair the (res, tr) scalars, all
    // on one generator; a `None` group means the trivial level
    let level_of = |d: u32| -> (FgAb, BigInt) {
        match symbol {
            Symbol::Box | Symbol::BoxSlash => (FgAb::free(1), big(1)),
            Symbol::Circle => (FgAb::cyclic(&big(d as i64)), big(1)),
            Symbol::BarBox => {
                if (n / d) % 2 == 0 {
                    (FgAb::free(1), big(-1))
                } else {
                    (FgAb::trivial(), big(0))
                }
            }
            Symbol::BarBoxSlash => {
                if (n / d) % 2 == 0 {
                    (FgAb::free(1), big(-1))
                } else {
                    (FgAb::cyclic(&big(2)), big(1))
                }
            }
            Symbol::BarCircle => {
                if (n / d) % 2 == 0 {
                    (FgAb::cyclic(&big(d as i64)), big(-1))
                } else {
                    (FgAb::trivial(), big(0))
                }
            }
            Symbol::Bullet => {
                if (n / d) % 2 == 0 {
                    (FgAb::trivial(), big(0))
                } else {
                    (FgAb::cyclic(&big(2)), big(1))
                }
            }
            Symbol::Ominus(i) => {
                let ord = BigInt::from(q).pow(i * (n / d)) - 1;
                (FgAb::cyclic(&ord), big(q as i64).pow(i))
            }
            Symbol::Oplus(i) => {
                // the subgroup generator acts by (-1)^{n/d} q^{i n/d}; the
                // level is cyclic of order |(-1)^{n/d} q^{i n/d} - 1|
                let signed = signed_power(q, i, n, d);
                (FgAb::cyclic(&(signed - 1)), -big(q as i64).pow(i))
            }
        }
    };

    let mut levels = BTreeMap::new();
    for &d in &divs {
        let (group, weyl_scalar) = level_of(d);
        let weyl = if group.gens() == 0 {
            Mat::zero(0, 0)
        } else {
            group.reduce_matrix(&Mat::scalar(1, &weyl_scalar))
        };
        levels.insert(d, Level { group, weyl });
    }

    let mut restrictions = BTreeMap::new();
    let mut transfers = BTreeMap::new();
    for &e in &divs {
        for &d in &divs {
            if d >= e || e % d != 0 {
                continue;
            }
            let ge = levels[&e].group.clone();
            let gd = levels[&d].group.clone();
            let scalar_maps: (BigInt, BigInt) = match symbol {
                // (res, tr) on the canonical generators
                Symbol::Box => (big(1), big((e / d) as i64)),
                Symbol::BoxSlash => (big((e / d) as i64), big(1)),
                Symbol::Circle => (big(1), big((e / d) as i64)),
                Symbol::BarBox => (big(1), big((e / d) as i64)),
                Symbol::BarBoxSlash => {
                    // restriction is the norm sum over C_e/C_d, alternating
                    // when the subgroup of order e acts by sign
                    let res = if (n / e) % 2 == 0 {
                        big((e / d) as i64)
                    } else if (e / d) % 2 == 1 {
                        big(1)
                    } else {
                        big(0)
                    };
                    (res, big(1))
                }
                Symbol::BarCircle => (big(1), big((e / d) as i64)),
                Symbol::Bullet => (big(1), big(1)),
                Symbol::Ominus(i) => {
                    let oe = BigInt::from(q).pow(i * (n / e)) - 1;
                    let od = BigInt::from(q).pow(i * (n / d)) - 1;
                    (od / oe, big(1))
                }
                Symbol::Oplus(i) => {
                    let te = signed_power(q, i, n, e) - 1;
                    let td = signed_power(q, i, n, d) - 1;
                    (td / te, big(1))
                }
            };
            let mk = |rows: &FgAb, cols: &FgAb, s: &BigInt| -> Mat {
                if rows.gens() == 0 || cols.gens() == 0 {
                    Mat::zero(rows.gens(), cols.gens())
                } else {
                    rows.reduce_matrix(&Mat::scalar(1, s))
                }
            };
            restrictions.insert((e, d), mk(&gd, &ge, &scalar_maps.0));
            transfers.insert((e, d), mk(&ge, &gd, &scalar_maps.1));
        }
    }
    let provenance = match symbol {
        Symbol::Box | Symbol::BarBox | Symbol::Ominus(_) | Symbol::Oplus(_) => Provenance::ImageOfR,
        Symbol::BoxSlash | Symbol::BarBoxSlash => Provenance::ImageOfL,
        _ => Provenance::Other,
    };
    Ok(MackeyFn::from_parts(n, levels, restrictions, transfers, provenance))
}

/// `(-1)^{n/d} q^{i n/d}` as a big integer.
fn signed_power(q: u64, i: u32, n: u32, d: u32) -> BigInt {
    let p = BigInt::from(q).pow(i * (n / d));
    if (n / d) % 2 == 0 {
        p
    } else {
        -p
    }
}

/// The order of `Ominus(i)`/`Oplus(i)` levels, `|(-1)^{n/d} q^{i n/d} - 1|`.
pub fn signed_level_order(q: u64, i: u32, n: u32, d: u32, twisted: bool) -> BigInt {
    if twisted {
        let t: BigInt = signed_power(q, i, n, d) - 1;
        BigInt::from(t.magnitude().clone())
    } else {
        BigInt::from(q).pow(i * (n / d)) - BigInt::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_names_roundtrip() {
        for s in [
            Symbol::Box,
            Symbol::BoxSlash,
            Symbol::Circle,
            Symbol::BarBox,
            Symbol::BarBoxSlash,
            Symbol::BarCircle,
            Symbol::Bullet,
            Symbol::Ominus(2),
            Symbol::Oplus(3),
        ] {
            assert_eq!(Symbol::parse(&s.name(), None).unwrap(), s);
        }
        assert!(Symbol::parse("garbage", None).is_err());
        assert_eq!(Symbol::parse("ominus", Some(4)).unwrap(), Symbol::Ominus(4));
    }

    #[test]
    fn c2_table_diagrams() {
        // the seven C_2 functors, against their two-level diagrams
        let q = 3;
        let boxm = named(Symbol::Box, q, 2).unwrap();
        assert_eq!(boxm.res(2, 1)[(0, 0)], big(1));
        assert_eq!(boxm.tr(2, 1)[(0, 0)], big(2));

        let bslash = named(Symbol::BoxSlash, q, 2).unwrap();
        assert_eq!(bslash.res(2, 1)[(0, 0)], big(2));
        assert_eq!(bslash.tr(2, 1)[(0, 0)], big(1));

        let circle = named(Symbol::Circle, q, 2).unwrap();
        assert_eq!(circle.level(2).group, FgAb::cyclic(&big(2)));
        assert!(circle.level(1).group.is_trivial());

        let barbox = named(Symbol::BarBox, q, 2).unwrap();
        assert!(barbox.level(2).group.is_trivial());
        assert_eq!(barbox.level(1).weyl[(0, 0)], big(-1));

        let barboxslash = named(Symbol::BarBoxSlash, q, 2).unwrap();
        assert_eq!(barboxslash.level(2).group, FgAb::cyclic(&big(2)));
        assert_eq!(barboxslash.res(2, 1)[(0, 0)], big(0));
        assert_eq!(barboxslash.tr(2, 1)[(0, 0)], big(1));

        let bullet = named(Symbol::Bullet, q, 2).unwrap();
        assert_eq!(bullet.level(2).group, FgAb::cyclic(&big(2)));
        assert!(bullet.level(1).group.is_trivial());

        // ominus^1 for q = 3: top Z/2, bottom Z/8, restriction 1 + q = 4,
        // transfer 1, Weyl 3
        let ominus = named(Symbol::Ominus(1), q, 2).unwrap();
        assert_eq!(ominus.level(2).group, FgAb::cyclic(&big(2)));
        assert_eq!(ominus.level(1).group, FgAb::cyclic(&big(8)));
        assert_eq!(ominus.res(2, 1)[(0, 0)], big(4));
        assert_eq!(ominus.tr(2, 1)[(0, 0)], big(1));
        assert_eq!(ominus.level(1).weyl[(0, 0)], big(3));

        // oplus^1 for q = 3: top Z/4 (order |-q-1|), restriction 1 - q = -2,
        // transfer 1
        let oplus = named(Symbol::Oplus(1), q, 2).unwrap();
        assert_eq!(oplus.level(2).group, FgAb::cyclic(&big(4)));
        assert_eq!(oplus.level(1).group, FgAb::cyclic(&big(8)));
        assert_eq!(oplus.res(2, 1)[(0, 0)], big(6)); // 1 - 3 mod 8
        assert_eq!(oplus.tr(2, 1)[(0, 0)], big(1));
        assert_eq!(oplus.level(1).weyl[(0, 0)], big(5)); // -3 mod 8
    }

    #[test]
    fn odd_prime_table_diagrams() {
        let boxm = named(Symbol::Box, 4, 3).unwrap();
        assert_eq!(boxm.res(3, 1)[(0, 0)], big(1));
        assert_eq!(boxm.tr(3, 1)[(0, 0)], big(3));
        let circle = named(Symbol::Circle, 4, 3).unwrap();
        assert_eq!(circle.level(3).group, FgAb::cyclic(&big(3)));
        // ominus^1 for q = 4, l = 3: top Z/3, bottom Z/63,
        // restriction 1 + q + q^2 = 21, transfer 1
        let om = named(Symbol::Ominus(1), 4, 3).unwrap();
        assert_eq!(om.level(3).group, FgAb::cyclic(&big(3)));
        assert_eq!(om.level(1).group, FgAb::cyclic(&big(63)));
        assert_eq!(om.res(3, 1)[(0, 0)], big(21));
        assert_eq!(om.tr(3, 1)[(0, 0)], big(1));
    }

    #[test]
    fn barcircle_levels_for_c4() {
        let bc = named(Symbol::BarCircle, 2, 4).unwrap();
        assert!(bc.level(4).group.is_trivial()); // index 1, odd
        assert_eq!(bc.level(2).group, FgAb::cyclic(&big(2))); // (Z/2)^sigma
        assert!(bc.level(1).group.is_trivial()); // (Z/1)^sigma
    }

    #[test]
    fn parity_gates() {
        assert!(matches!(
            named(Symbol::BarBox, 3, 3),
            Err(KrogError::SymbolNeedsEvenOrder(_, 3))
        ));
        assert!(named(Symbol::Oplus(1), 3, 3).is_err());
    }

    #[test]
    fn catalog_validates_on_a_grid() {
        for n in [1u32, 2, 3, 4, 6] {
            for sym in [Symbol::Box, Symbol::BoxSlash, Symbol::Circle] {
                assert!(named(sym, 2, n).unwrap().validate().is_empty());
            }
            if n % 2 == 0 {
                for sym in [Symbol::BarBox, Symbol::BarBoxSlash, Symbol::BarCircle, Symbol::Bullet] {
                    assert!(named(sym, 2, n).unwrap().validate().is_empty(), "{} n={n}", sym.name());
                }
            }
            for q in [2u64, 3] {
                let om = named(Symbol::Ominus(1), q, n).unwrap();
                assert!(om.validate().is_empty(), "ominus q={q} n={n}");
                if n % 2 == 0 {
                    let op = named(Symbol::Oplus(1), q, n).unwrap();
                    assert!(op.validate().is_empty(), "oplus q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn signed_orders() {
        // Lemma-style orders |(-1)^{n/m} q^{ni/m} - 1|
        assert_eq!(signed_level_order(3, 1, 2, 2, true), big(4)); // |-3-1|
        assert_eq!(signed_level_order(3, 1, 2, 1, true), big(8)); // |9-1|
        assert_eq!(signed_level_order(3, 1, 2, 2, false), big(2));
    }
}
