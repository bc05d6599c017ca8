//! On-disk JSON format for presentations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use algred::{Generator, Mode, NcPolynomial, Presentation, Rational, Word};

use crate::CliError;

fn default_degree() -> usize {
    1
}

/// Presentation document: generators with optional degrees (default 1), a
/// mode, and relations as lists of terms.  Coefficients are strings, "a" or
/// "a/b", so exact rationals survive the trip through JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub generators: Vec<GeneratorSpec>,
    pub mode: ModeSpec,
    pub relations: Vec<Vec<TermSpec>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(default = "default_degree")]
    pub degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    Graded,
    Filtered,
}

impl From<ModeSpec> for Mode {
    fn from(m: ModeSpec) -> Mode {
        match m {
            ModeSpec::Graded => Mode::Graded,
            ModeSpec::Filtered => Mode::Filtered,
        }
    }
}

impl From<Mode> for ModeSpec {
    fn from(m: Mode) -> ModeSpec {
        match m {
            Mode::Graded => ModeSpec::Graded,
            Mode::Filtered => ModeSpec::Filtered,
        }
    }
}

impl std::fmt::Display for ModeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModeSpec::Graded => write!(f, "graded"),
            ModeSpec::Filtered => write!(f, "filtered"),
        }
    }
}

/// One monomial of a relation: the word as a list of generator names (empty
/// for the constant term) and its coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub word: Vec<String>,
    pub coeff: String,
}

/// Parses "a" or "a/b" with integer numerator and nonzero integer
/// denominator.
pub fn parse_coeff(s: &str) -> Result<Rational, CliError> {
    let text = s.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let bad = || CliError::Input(format!("cannot parse coefficient {s:?} as an exact rational"));
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(text) => text.parse().map_err(|_| bad())?,
        None => BigInt::from(1),
    };
    if d.is_zero() {
        return Err(CliError::Input(format!(
            "coefficient {s:?} has a zero denominator"
        )));
    }
    Ok(Rational::new(n, d))
}

impl PresentationFile {
    /// Builds the exact presentation over the rationals.  Name and degree
    /// validation is delegated to the presentation constructor.
    pub fn to_presentation(&self) -> Result<Presentation<Rational>, CliError> {
        let mut index: BTreeMap<&str, u32> = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            index.insert(g.name.as_str(), i as u32);
        }
        let weights: Vec<usize> = self.generators.iter().map(|g| g.degree).collect();
        let mut relations = Vec::with_capacity(self.relations.len());
        for terms in &self.relations {
            let mut built = Vec::with_capacity(terms.len());
            for term in terms {
                let mut letters = Vec::with_capacity(term.word.len());
                for name in &term.word {
                    let letter = index.get(name.as_str()).ok_or_else(|| {
                        CliError::Input(format!(
                            "relation references undeclared generator {name:?}"
                        ))
                    })?;
                    letters.push(*letter);
                }
                built.push((Word::from_letters(&letters), parse_coeff(&term.coeff)?));
            }
            relations.push(NcPolynomial::from_terms(&weights, built));
        }
        let generators = self
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.degree))
            .collect();
        Ok(Presentation::new(
            generators,
            relations,
            self.mode.into(),
            Rational::from_integer(BigInt::from(1)),
        )?)
    }

    /// Renders a presentation back into the document format.
    pub fn from_presentation(pres: &Presentation<Rational>) -> Self {
        let names = pres.generator_names();
        let generators = pres
            .generators()
            .iter()
            .map(|g| GeneratorSpec {
                name: g.name.clone(),
                degree: g.degree,
            })
            .collect();
        let relations = pres
            .relations()
            .iter()
            .map(|r| {
                r.terms()
                    .map(|(w, c)| TermSpec {
                        word: w
                            .letters()
                            .iter()
                            .map(|l| names[*l as usize].clone())
                            .collect(),
                        coeff: c.to_string(),
                    })
                    .collect()
            })
            .collect();
        PresentationFile {
            generators,
            mode: pres.mode().into(),
            relations,
        }
    }
}
