//! The tight-contact-structure census of a cyclic plumbing with an arm.
//!
//! For the cycle tuple `(a_1, ..., a_n)` and arm tuple `(z_1, ..., z_m)` the
//! counts are products: `(a_1-1)...(a_n-1)(z_1-1)...(z_m-1)` structures with
//! no torsion (all Stein fillable on the positive side), and
//! `z_1(z_2-1)...(z_m-1)` weakly fillable structures at every torsion level,
//! with twisting `2l*pi` on the positive side and `(2l-1)*pi` on the negative
//! side. On the negative side the level-1 family is Stein fillable exactly
//! when the cycle tuple is embeddable, so the census can consult the Kirby
//! engine for a verdict. Each report cross-checks its counts against the
//! solid-torus counts of the boundary-slope expansions.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cfrac::Cfrac;
use crate::cycles::{self, CyclicChain, Embeddability, Sign};
use crate::error::{Error, Result};
use crate::legendrian::{chern_cochain, enumerate_rotation_vectors, ChernCochain, RotationVector};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpecData {
    sign: Sign,
    a: Vec<i64>,
    z: Vec<i64>,
}

/// A plumbing with cycle tuple `a` (length >= 2, entries >= 2, first >= 3),
/// arm tuple `z` (entries >= 2, empty for a bare cycle), and an edge sign.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SpecData", into = "SpecData")]
pub struct PlumbingSpec {
    sign: Sign,
    a: Vec<i64>,
    z: Vec<i64>,
}

impl PlumbingSpec {
    pub fn new(sign: Sign, a: Vec<i64>, z: Vec<i64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::usage("cycle tuple must have length >= 2"));
        }
        if a.iter().any(|&x| x < 2) {
            return Err(Error::usage("cycle entries must be >= 2"));
        }
        if a[0] < 3 {
            return Err(Error::usage("first cycle entry must be >= 3"));
        }
        if z.iter().any(|&x| x < 2) {
            return Err(Error::usage("arm entries must be >= 2"));
        }
        Ok(PlumbingSpec { sign, a, z })
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    pub fn z(&self) -> &[i64] {
        &self.z
    }
}

impl TryFrom<SpecData> for PlumbingSpec {
    type Error = Error;

    fn try_from(d: SpecData) -> Result<Self> {
        PlumbingSpec::new(d.sign, d.a, d.z)
    }
}

impl From<PlumbingSpec> for SpecData {
    fn from(s: PlumbingSpec) -> SpecData {
        SpecData {
            sign: s.sign,
            a: s.a,
            z: s.z,
        }
    }
}

impl fmt::Display for PlumbingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |t: &[i64]| {
            t.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "{} a=({}) z=({})",
            self.sign,
            join(&self.a),
            join(&self.z)
        )
    }
}

/// Twisting of a structure: minimal, or an integer multiple of pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Twisting {
    Minimal,
    Pi(u32),
}

impl fmt::Display for Twisting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Twisting::Minimal => write!(f, "minimal"),
            Twisting::Pi(1) => write!(f, "pi"),
            Twisting::Pi(n) => write!(f, "{n}pi"),
        }
    }
}

impl std::str::FromStr for Twisting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "minimal" {
            return Ok(Twisting::Minimal);
        }
        if s == "pi" {
            return Ok(Twisting::Pi(1));
        }
        if let Some(n) = s.strip_suffix("pi") {
            if let Ok(n) = n.parse() {
                return Ok(Twisting::Pi(n));
            }
        }
        Err(Error::usage(format!("invalid twisting {s:?}")))
    }
}

impl Serialize for Twisting {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Twisting {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fillability {
    Stein,
    Weak,
    SteinIfEmbeddable,
}

impl fmt::Display for Fillability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fillability::Stein => write!(f, "stein"),
            Fillability::Weak => write!(f, "weak"),
            Fillability::SteinIfEmbeddable => write!(f, "stein-if-embeddable"),
        }
    }
}

/// One enumerated structure: its rotation vector (empty for the bare-cycle
/// torsion family), torsion level, twisting, and fillability tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDescriptor {
    pub rotation: Vec<i64>,
    pub torsion: u32,
    pub twisting: Twisting,
    pub fillability: Fillability,
}

impl StructureDescriptor {
    pub fn chern(&self) -> ChernCochain {
        chern_cochain(&RotationVector(self.rotation.clone()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub min_twisting: u64,
    pub per_torsion: u64,
    pub no_giroux: u64,
}

/// Structured census output: counts, the enumerated structures at torsion
/// levels 0 and 1, and an optional embeddability verdict for the cycle tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub spec: PlumbingSpec,
    pub counts: Counts,
    pub structures: Vec<StructureDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub embeddable: Option<Embeddability>,
}

#[derive(Debug, Clone, Copy)]
pub struct CensusOptions {
    /// Consult the Kirby engine for the negative-side level-1 tag.
    pub resolve_embeddable: bool,
    /// Blowup depth bound for the embeddability search.
    pub max_k: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            resolve_embeddable: false,
            max_k: cycles::DEFAULT_BLOWUP_BOUND,
        }
    }
}

/// The solid-torus structure count of a boundary-slope expansion
/// `(c_1, ..., c_k)`: `(c_1-1)...(c_{k-1}-1) * c_k`.
pub fn honda_count(coeffs: &[i64]) -> Result<u64> {
    let coeffs = Cfrac::new(coeffs.to_vec())?;
    let coeffs = coeffs.coeffs();
    let mut n: u64 = coeffs[coeffs.len() - 1] as u64;
    for &c in &coeffs[..coeffs.len() - 1] {
        n = n.checked_mul((c - 1) as u64).ok_or(Error::Overflow)?;
    }
    Ok(n)
}

fn product_minus_one(t: &[i64]) -> Result<u64> {
    let mut n: u64 = 1;
    for &x in t {
        n = n.checked_mul((x - 1) as u64).ok_or(Error::Overflow)?;
    }
    Ok(n)
}

fn arm_torsion_count(z: &[i64]) -> Result<u64> {
    let mut n = z[0] as u64;
    for &x in &z[1..] {
        n = n.checked_mul((x - 1) as u64).ok_or(Error::Overflow)?;
    }
    Ok(n)
}

/// Cross-checks the product formulas against `honda_count` on the two
/// boundary-slope expansions.
fn verify_counts(spec: &PlumbingSpec, min_twisting: u64, per_torsion: u64) -> Result<()> {
    let mut a_dec = spec.a.to_vec();
    *a_dec.last_mut().unwrap() -= 1;
    let mut z_rev: Vec<i64> = spec.z.iter().rev().copied().collect();
    let h_z = honda_count(&z_rev)?;
    *z_rev.last_mut().unwrap() -= 1;
    let h_a = honda_count(&a_dec)?;
    let h_z_dec = honda_count(&z_rev)?;
    if min_twisting != h_a.checked_mul(h_z_dec).ok_or(Error::Overflow)? || per_torsion != h_z {
        return Err(Error::Internal(
            "census counts disagree with the solid-torus cross-check".into(),
        ));
    }
    Ok(())
}

/// Tags for the torsion-level-l family.
fn torsion_labels(sign: Sign, l: u32) -> (Twisting, Fillability) {
    match sign {
        Sign::Plus => (Twisting::Pi(2 * l), Fillability::Weak),
        Sign::Minus => (
            Twisting::Pi(2 * l - 1),
            if l == 1 {
                Fillability::SteinIfEmbeddable
            } else {
                Fillability::Weak
            },
        ),
    }
}

/// Enumerates the structures at torsion level `l`. Level 0 stabilizes every
/// unknot of the plumbing diagram from tb = -1 to one above its framing;
/// level >= 1 stabilizes the arm chain with the first component starting at
/// tb = 0. Cardinalities match the census counts.
pub fn enumerate_tight(spec: &PlumbingSpec, l: u32) -> Result<Vec<StructureDescriptor>> {
    if l == 0 {
        let targets: Vec<(i64, i64)> = spec
            .a
            .iter()
            .chain(spec.z.iter())
            .map(|&f| (-1, -f))
            .collect();
        let vectors = enumerate_rotation_vectors(&targets)?;
        return Ok(vectors
            .into_iter()
            .map(|v| StructureDescriptor {
                rotation: v.0,
                torsion: 0,
                twisting: Twisting::Minimal,
                fillability: Fillability::Stein,
            })
            .collect());
    }

    let (twisting, fillability) = torsion_labels(spec.sign, l);
    if spec.z.is_empty() {
        // bare cycle: a unique structure at every level
        return Ok(vec![StructureDescriptor {
            rotation: Vec::new(),
            torsion: l,
            twisting,
            fillability,
        }]);
    }
    let mut targets = vec![(0, -spec.z[0])];
    targets.extend(spec.z[1..].iter().map(|&f| (-1, -f)));
    let vectors = enumerate_rotation_vectors(&targets)?;
    Ok(vectors
        .into_iter()
        .map(|v| StructureDescriptor {
            rotation: v.0,
            torsion: l,
            twisting,
            fillability,
        })
        .collect())
}

/// Full census of a plumbing spec. With an empty arm this is the bare-cycle
/// census (unique torsion structure per level).
pub fn census(spec: &PlumbingSpec, opts: &CensusOptions) -> Result<CensusReport> {
    let a_part = product_minus_one(&spec.a)?;
    let (min_twisting, per_torsion) = if spec.z.is_empty() {
        (a_part, 1)
    } else {
        let mt = a_part
            .checked_mul(product_minus_one(&spec.z)?)
            .ok_or(Error::Overflow)?;
        let pt = arm_torsion_count(&spec.z)?;
        verify_counts(spec, mt, pt)?;
        (mt, pt)
    };
    let no_giroux = match spec.sign {
        Sign::Plus => min_twisting,
        Sign::Minus => min_twisting
            .checked_add(per_torsion)
            .ok_or(Error::Overflow)?,
    };

    let mut structures = enumerate_tight(spec, 0)?;
    structures.extend(enumerate_tight(spec, 1)?);

    let embeddable = if opts.resolve_embeddable && spec.sign == Sign::Minus {
        let chain = CyclicChain::new(spec.a.to_vec(), spec.sign)?;
        Some(cycles::is_embeddable(&chain, opts.max_k)?)
    } else {
        None
    };

    Ok(CensusReport {
        spec: spec.clone(),
        counts: Counts {
            min_twisting,
            per_torsion,
            no_giroux,
        },
        structures,
        embeddable,
    })
}

/// Census of a bare cycle (no arm).
pub fn cyclic_census(a: &[i64], sign: Sign, opts: &CensusOptions) -> Result<CensusReport> {
    let spec = PlumbingSpec::new(sign, a.to_vec(), Vec::new())?;
    census(&spec, opts)
}
