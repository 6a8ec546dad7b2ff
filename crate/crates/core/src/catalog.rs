//! Named example complexes.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::enhanced_complex::{default_generators, Generator};
use crate::error::{Error, Result};
use crate::integral::ZComplex;
use crate::random::random_zcomplex;

/// The eight-generator complex with pairs `(4,1)`, `(5,3)`, `(7,6)`, `(8,2)`
/// and Bruhat numbers 6, 3, 2, 4, already in rook form.
pub fn fig1() -> ZComplex {
    let degrees = [0, 1, 1, 1, 2, 1, 2, 2];
    ZComplex::from_entries(default_generators(&degrees), &[(4, 1, 6), (5, 3, 3), (7, 6, 2), (8, 2, 4)])
        .expect("valid fixture")
}

/// Cellular model of real projective space: one cell per degree `0..=n`,
/// with `∂` of an even-degree cell (degree ≥ 2) twice the cell below.
pub fn rp(n: usize) -> ZComplex {
    let degrees: Vec<usize> = (0..=n).collect();
    let entries: Vec<(usize, usize, i64)> = (2..=n).step_by(2).map(|k| (k + 1, k, 2)).collect();
    ZComplex::from_entries(default_generators(&degrees), &entries).expect("valid fixture")
}

/// Cells `a`, `b`, `c` in degrees 0, 2, 4 with zero boundary.
pub fn cp2() -> ZComplex {
    ZComplex::zero(vec![Generator::new("a", 0), Generator::new("b", 2), Generator::new("c", 4)])
}

/// Cells in degrees 0 and `n` with zero boundary.
pub fn sphere(n: usize) -> ZComplex {
    ZComplex::zero(vec![Generator::new("c1", 0), Generator::new("c2", n)])
}

/// Cells in degrees 0, 1, 2 with `∂c3 = p·c2`.
pub fn lens(p: i64) -> ZComplex {
    ZComplex::from_entries(default_generators(&[0, 1, 2]), &[(3, 2, p)]).expect("valid fixture")
}

/// A random integer complex, reproducible from `seed`.
pub fn random(seed: u64, size: usize) -> ZComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_zcomplex(size, 2, 5, &mut rng)
}

/// A request for one of the named complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Named {
    Fig1,
    Rp(usize),
    Cp2,
    Sphere(usize),
    Lens(i64),
    Random { seed: u64, size: usize },
    Empty,
}

impl Named {
    /// Parses a name followed by its parameters, e.g. `["rp", "6"]`.
    pub fn parse(args: &[String]) -> Result<Named> {
        let name = args.first().ok_or_else(|| Error::UnknownGenerator(String::new()))?;
        let param = |i: usize| -> Result<String> {
            args.get(i).cloned().ok_or_else(|| Error::BadParameter(format!("{name} needs {i} parameter(s)")))
        };
        fn num<T: FromStr>(text: &str) -> Result<T> {
            text.parse().map_err(|_| Error::BadParameter(format!("not a valid number: {text:?}")))
        }
        let expect = |count: usize| -> Result<()> {
            if args.len() != count + 1 {
                return Err(Error::BadParameter(format!("{name} takes {count} parameter(s)")));
            }
            Ok(())
        };
        let named = match name.as_str() {
            "fig1" => {
                expect(0)?;
                Named::Fig1
            }
            "empty" => {
                expect(0)?;
                Named::Empty
            }
            "cp2" => {
                expect(0)?;
                Named::Cp2
            }
            "rp" => {
                expect(1)?;
                Named::Rp(num(&param(1)?)?)
            }
            "sphere" => {
                expect(1)?;
                let n: usize = num(&param(1)?)?;
                if n == 0 {
                    return Err(Error::BadParameter("sphere dimension must be positive".into()));
                }
                Named::Sphere(n)
            }
            "lens" => {
                expect(1)?;
                let p: i64 = num(&param(1)?)?;
                if p == 0 {
                    return Err(Error::BadParameter("lens order must be nonzero".into()));
                }
                Named::Lens(p)
            }
            "random" => {
                expect(2)?;
                Named::Random { seed: num(&param(1)?)?, size: num(&param(2)?)? }
            }
            other => return Err(Error::UnknownGenerator(other.to_string())),
        };
        Ok(named)
    }

    pub fn build(&self) -> ZComplex {
        match *self {
            Named::Fig1 => fig1(),
            Named::Rp(n) => rp(n),
            Named::Cp2 => cp2(),
            Named::Sphere(n) => sphere(n),
            Named::Lens(p) => lens(p),
            Named::Random { seed, size } => random(seed, size),
            Named::Empty => ZComplex::empty(),
        }
    }
}
