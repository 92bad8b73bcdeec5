//! Problem files: the JSON schema, exact number encodings, canonical hashing
//! and validation into a ready-to-solve [`Problem`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::avoidance::{PolySystemSet, Polynomial};
use crate::error::{Error, Result};
use crate::exactnum::{
    format_rational, generated_subalgebra, parse_rational, Field, FieldDescriptor, FieldElement, IntPoly,
};
use crate::fieldlat::{
    build_lattice, denominator_ideal, determinant, discriminant_m, DenominatorIdeal, DeterminantReport,
    EmbeddedLattice, ModuleM, SubfieldK, DEFAULT_CANDIDATE_CAP,
};
use crate::geometry::Sublattice;
use crate::kronecker::{FormMatrix, PRECISION_CAP};

/// An exact number: a JSON integer or a string `"n"`, `"n/d"` or `"0.05"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn rational(&self) -> Result<BigRational> {
        match self {
            Num::Int(v) => Ok(BigRational::from_integer((*v).into())),
            Num::Text(s) => parse_rational(s).ok_or_else(|| Error::Parse(format!("not an exact rational: {s:?}"))),
        }
    }

    pub fn integer(&self) -> Result<BigInt> {
        let q = self.rational()?;
        if !q.is_integer() {
            return Err(Error::Parse(format!("expected an integer, got {}", format_rational(&q))));
        }
        Ok(q.to_integer())
    }
}

impl From<&BigRational> for Num {
    fn from(q: &BigRational) -> Self {
        Num::Text(format_rational(q))
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Int(v) => write!(f, "{v}"),
            Num::Text(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    /// Integer coefficients, constant term first.
    pub minpoly: Vec<Num>,
    #[serde(default)]
    pub root_interval: Option<[Num; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexImage {
    pub re: Vec<Num>,
    pub im: Vec<Num>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubfieldSpec {
    pub minpoly: Vec<Num>,
    /// Images of the generator of `K` under its real embeddings, as E coordinates.
    pub real_images: Vec<Vec<Num>>,
    #[serde(default)]
    pub complex_images: Vec<ComplexImage>,
    /// Integral basis in power-basis coordinates of `K`.
    pub integral_basis: Vec<Vec<Num>>,
    pub discriminant: Num,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    /// Z-basis of the fractional ideal, in power-basis coordinates of `K`.
    pub ideal: Vec<Vec<Num>>,
    /// The vector `y_j`: `w` components, each in integral-basis coordinates.
    pub y: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub w: usize,
    pub pairs: Vec<PairSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub a: Vec<Num>,
    pub epsilon: Num,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum AvoidanceSpec {
    /// Each polynomial maps comma-separated exponent vectors such as `"1,0"` to coefficients.
    Polynomials {
        systems: Vec<Vec<BTreeMap<String, Num>>>,
        #[serde(default)]
        zero_locus_trivial: bool,
    },
    /// Each sublattice is a list of basis columns in lattice-basis coordinates.
    Sublattices { sublattices: Vec<Vec<Vec<Num>>> },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default)]
    pub ell: Option<usize>,
    #[serde(default)]
    pub precision_cap: Option<u32>,
    #[serde(default)]
    pub search_cap: Option<Num>,
    #[serde(default)]
    pub candidate_cap: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub field: FieldSpec,
    #[serde(default)]
    pub subfield: Option<SubfieldSpec>,
    pub module: ModuleSpec,
    /// `t` rows of `wd` entries, each entry in power-basis coordinates of `E`.
    pub forms: Vec<Vec<Vec<Num>>>,
    pub target: TargetSpec,
    pub avoidance: AvoidanceSpec,
    #[serde(default)]
    pub options: OptionsSpec,
}

/// SHA-256 of the compact, key-sorted JSON rendering.
pub fn canonical_hash(v: &serde_json::Value) -> String {
    let text = serde_json::to_string(v).expect("JSON values serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug)]
pub enum Avoidance {
    Polynomials(PolySystemSet),
    Sublattices(Vec<Sublattice>),
}

#[derive(Clone, Debug)]
pub struct Options {
    pub precision_cap: u32,
    pub search_cap: Option<BigInt>,
    pub candidate_cap: usize,
}

/// A validated problem with every derived structure in place.
#[derive(Clone, Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub hash: String,
    pub efield: Field,
    pub k: SubfieldK,
    pub module: ModuleM,
    pub lattice: EmbeddedLattice,
    pub det: DeterminantReport,
    /// `D_K(M)`.
    pub disc_m: BigRational,
    pub ideal: DenominatorIdeal,
    pub forms: FormMatrix,
    pub a: Vec<BigRational>,
    pub epsilon: BigRational,
    pub avoidance: Avoidance,
    /// Degree of the field generated by the lattice entries and the form coefficients.
    pub ell_computed: usize,
    pub ell: usize,
    pub k1_basis: Vec<FieldElement>,
    pub options: Options,
}

fn rats(v: &[Num]) -> Result<Vec<BigRational>> {
    v.iter().map(Num::rational).collect()
}

fn ints(v: &[Num]) -> Result<Vec<BigInt>> {
    v.iter().map(Num::integer).collect()
}

fn element(field: &Field, v: &[Num]) -> Result<FieldElement> {
    FieldElement::from_coords(field, rats(v)?)
}

fn parse_exponents(key: &str, nvars: usize) -> Result<Vec<u32>> {
    let e: Vec<u32> = key
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent vector {key:?}"))))
        .collect::<Result<_>>()?;
    if e.len() != nvars {
        return Err(Error::InvalidInput(format!("exponent vector {key:?} needs {nvars} entries")));
    }
    Ok(e)
}

impl Problem {
    /// Parse and validate problem text.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let hash = canonical_hash(&value);
        let file: ProblemFile = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(file, hash)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn from_file(file: ProblemFile, hash: String) -> Result<Self> {
        let minpoly = IntPoly::new(ints(&file.field.minpoly)?);
        let interval = match &file.field.root_interval {
            Some([lo, hi]) => Some((lo.rational()?, hi.rational()?)),
            None => None,
        };
        let efield = FieldDescriptor::validate(minpoly, interval)?;
        if !efield.is_real() {
            return Err(Error::InvalidInput("the ambient field needs a root interval selecting a real embedding".into()));
        }
        let k = match &file.subfield {
            None => SubfieldK::rationals(&efield),
            Some(sf) => SubfieldK::new(
                &efield,
                IntPoly::new(ints(&sf.minpoly)?),
                sf.real_images.iter().map(|c| element(&efield, c)).collect::<Result<_>>()?,
                sf.complex_images
                    .iter()
                    .map(|c| Ok((element(&efield, &c.re)?, element(&efield, &c.im)?)))
                    .collect::<Result<_>>()?,
                sf.integral_basis.iter().map(|c| rats(c)).collect::<Result<_>>()?,
                sf.discriminant.integer()?,
            )?,
        };
        let raw = file
            .module
            .pairs
            .iter()
            .map(|p| {
                Ok((
                    p.ideal.iter().map(|c| rats(c)).collect::<Result<Vec<_>>>()?,
                    p.y.iter().map(|c| ints(c)).collect::<Result<Vec<_>>>()?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let module = ModuleM::new(&k, file.module.w, raw)?;
        let lattice = build_lattice(&module, &k)?;
        let det = determinant(&lattice, &module, &k)?;
        let disc_m = discriminant_m(&module, &k);
        let candidate_cap = file.options.candidate_cap.unwrap_or(DEFAULT_CANDIDATE_CAP).max(1);
        let ideal = denominator_ideal(&module, &k, candidate_cap)?;

        let wd = lattice.dim();
        let rows: Vec<Vec<FieldElement>> = file
            .forms
            .iter()
            .map(|r| r.iter().map(|c| element(&efield, c)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        if rows.iter().any(|r| r.len() != wd) {
            return Err(Error::InvalidInput(format!("every linear form needs wd = {wd} coefficients")));
        }
        let forms = FormMatrix::new(rows)?;
        let a = rats(&file.target.a)?;
        if a.len() != forms.t() {
            return Err(Error::InvalidInput(format!("target has {} entries, there are {} forms", a.len(), forms.t())));
        }
        let epsilon = file.target.epsilon.rational()?;
        if !epsilon.is_positive() {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }

        let avoidance = match &file.avoidance {
            AvoidanceSpec::Polynomials { systems, zero_locus_trivial } => {
                let polys = systems
                    .iter()
                    .map(|sys| {
                        sys.iter()
                            .map(|terms| {
                                let t = terms
                                    .iter()
                                    .map(|(key, c)| Ok((parse_exponents(key, wd)?, c.rational()?)))
                                    .collect::<Result<Vec<_>>>()?;
                                Polynomial::new(wd, t)
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Avoidance::Polynomials(PolySystemSet::new(polys, wd, *zero_locus_trivial)?)
            }
            AvoidanceSpec::Sublattices { sublattices } => {
                if sublattices.is_empty() {
                    return Err(Error::InvalidInput("no sublattices given".into()));
                }
                let n = lattice.rank();
                let gs = sublattices
                    .iter()
                    .map(|cols| {
                        let c = cols.iter().map(|c| ints(c)).collect::<Result<Vec<_>>>()?;
                        if c.len() != n || c.iter().any(|v| v.len() != n) {
                            return Err(Error::InvalidInput(format!("sublattice bases need {n} columns of length {n}")));
                        }
                        Sublattice::from_columns(&c)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Avoidance::Sublattices(gs)
            }
        };

        let mut k1_gens: Vec<FieldElement> = lattice.columns().iter().flatten().cloned().collect();
        k1_gens.extend(k.real_images.iter().cloned());
        k1_gens.extend(k.complex_images.iter().flat_map(|(r, i)| [r.clone(), i.clone()]));
        let k1_basis = generated_subalgebra(&efield, &k1_gens);
        let mut all = k1_gens;
        all.extend(forms.entries());
        let ell_computed = generated_subalgebra(&efield, &all).len();
        let ell = match file.options.ell {
            Some(l) if l < ell_computed => {
                return Err(Error::InvalidInput(format!(
                    "ell override {l} is below the degree {ell_computed} of the generated field"
                )))
            }
            Some(l) => l,
            None => ell_computed,
        };
        let options = Options {
            precision_cap: file.options.precision_cap.unwrap_or(PRECISION_CAP).max(64),
            search_cap: file.options.search_cap.as_ref().map(Num::integer).transpose()?,
            candidate_cap,
        };
        Ok(Problem {
            file,
            hash,
            efield,
            k,
            module,
            lattice,
            det,
            disc_m,
            ideal,
            forms,
            a,
            epsilon,
            avoidance,
            ell_computed,
            ell,
            k1_basis,
            options,
        })
    }

    pub fn t(&self) -> usize {
        self.forms.t()
    }

    pub fn s(&self) -> usize {
        self.module.s
    }

    pub fn d(&self) -> usize {
        self.k.d
    }

    pub fn w(&self) -> usize {
        self.module.w
    }

    pub fn sd(&self) -> usize {
        self.s() * self.d()
    }

    pub fn wd(&self) -> usize {
        self.w() * self.d()
    }

    /// Whether the module lies in `O_K^w`.
    pub fn is_integral(&self) -> bool {
        self.module.is_integral(&self.k)
    }

    /// `|D_K(M)|`.
    pub fn abs_disc_m(&self) -> BigRational {
        self.disc_m.abs()
    }

    pub fn m_s(&self) -> Option<u64> {
        match &self.avoidance {
            Avoidance::Polynomials(s) => Some(s.m_s),
            Avoidance::Sublattices(_) => None,
        }
    }

    /// Product of the sublattice indices, `D' = D / det(Lambda)^m`.
    pub fn d_prime(&self) -> Option<BigInt> {
        match &self.avoidance {
            Avoidance::Sublattices(gs) => Some(gs.iter().fold(BigInt::one(), |a, g| a * &g.index)),
            Avoidance::Polynomials(_) => None,
        }
    }
}
