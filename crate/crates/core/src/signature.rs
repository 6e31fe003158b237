//! Signature literals as accepted on the command line:
//! `kripke:box,diamond,atoms`, `graded:0..K`, `graded:auto`,
//! `prob:auto-grid`, `prob:auto-grid-strict`, `nbhd:box`.

use std::fmt;
use std::str::FromStr;

use crate::coalgebra::{Coalgebra, KindTag};
use crate::error::{Error, Result};
use crate::liftings::LambdaSignature;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignatureSpec {
    Kripke {
        with_box: bool,
        with_diamond: bool,
        with_atoms: bool,
    },
    Graded {
        max_k: Option<u64>,
    },
    Probabilistic {
        lower: bool,
        strict: bool,
    },
    Neighborhood,
}

impl SignatureSpec {
    /// The separating default for a functor kind.
    pub fn default_for(kind: KindTag) -> Self {
        match kind {
            KindTag::Kripke => SignatureSpec::Kripke {
                with_box: true,
                with_diamond: true,
                with_atoms: true,
            },
            KindTag::Multiset => SignatureSpec::Graded { max_k: None },
            KindTag::Distribution => SignatureSpec::Probabilistic {
                lower: true,
                strict: false,
            },
            KindTag::Neighborhood => SignatureSpec::Neighborhood,
        }
    }

    pub fn kind(&self) -> KindTag {
        match self {
            SignatureSpec::Kripke { .. } => KindTag::Kripke,
            SignatureSpec::Graded { .. } => KindTag::Multiset,
            SignatureSpec::Probabilistic { .. } => KindTag::Distribution,
            SignatureSpec::Neighborhood => KindTag::Neighborhood,
        }
    }

    /// Resolves against the models the signature will be used with; atom
    /// vocabularies and threshold grids are taken from them.
    pub fn resolve(&self, models: &[&Coalgebra]) -> Result<LambdaSignature> {
        for c in models {
            if c.tag() != self.kind() {
                return Err(Error::KindMismatch {
                    expected: self.kind(),
                    found: c.tag(),
                });
            }
        }
        Ok(match *self {
            SignatureSpec::Kripke {
                with_box,
                with_diamond,
                with_atoms,
            } => {
                let mut vocabulary: Vec<String> = models
                    .iter()
                    .flat_map(|c| c.kind().atoms().iter().cloned())
                    .collect();
                vocabulary.sort();
                vocabulary.dedup();
                let atoms = if with_atoms {
                    vocabulary.clone()
                } else {
                    vec![]
                };
                let separating =
                    (with_box || with_diamond) && (with_atoms || vocabulary.is_empty());
                LambdaSignature::kripke(with_box, with_diamond, &atoms)
                    .declare_separating(separating)
            }
            SignatureSpec::Graded { max_k: None } => LambdaSignature::graded_auto(models),
            SignatureSpec::Graded { max_k: Some(k) } => LambdaSignature::graded(k, models),
            SignatureSpec::Probabilistic { lower, strict } => {
                LambdaSignature::probabilistic_auto(models, lower, strict)?
            }
            SignatureSpec::Neighborhood => LambdaSignature::neighborhood(),
        })
    }
}

impl FromStr for SignatureSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Signature(format!("unrecognized signature literal {s:?}"));
        let (family, rest) = s.split_once(':').ok_or_else(bad)?;
        match family.trim() {
            "kripke" => {
                let (mut with_box, mut with_diamond, mut with_atoms) = (false, false, false);
                for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    match part {
                        "box" => with_box = true,
                        "diamond" => with_diamond = true,
                        "atoms" => with_atoms = true,
                        _ => return Err(bad()),
                    }
                }
                Ok(SignatureSpec::Kripke {
                    with_box,
                    with_diamond,
                    with_atoms,
                })
            }
            "graded" => match rest.trim() {
                "auto" => Ok(SignatureSpec::Graded { max_k: None }),
                range => {
                    let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
                    if lo.trim() != "0" {
                        return Err(bad());
                    }
                    let k = hi.trim().parse().map_err(|_| bad())?;
                    Ok(SignatureSpec::Graded { max_k: Some(k) })
                }
            },
            "prob" => match rest.trim() {
                "auto-grid" => Ok(SignatureSpec::Probabilistic {
                    lower: true,
                    strict: false,
                }),
                "auto-grid-strict" => Ok(SignatureSpec::Probabilistic {
                    lower: false,
                    strict: true,
                }),
                "auto-grid-both" => Ok(SignatureSpec::Probabilistic {
                    lower: true,
                    strict: true,
                }),
                _ => Err(bad()),
            },
            "nbhd" if rest.trim() == "box" => Ok(SignatureSpec::Neighborhood),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SignatureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureSpec::Kripke {
                with_box,
                with_diamond,
                with_atoms,
            } => {
                let parts: Vec<&str> = [
                    (*with_box, "box"),
                    (*with_diamond, "diamond"),
                    (*with_atoms, "atoms"),
                ]
                .into_iter()
                .filter(|(on, _)| *on)
                .map(|(_, n)| n)
                .collect();
                write!(f, "kripke:{}", parts.join(","))
            }
            SignatureSpec::Graded { max_k: None } => f.write_str("graded:auto"),
            SignatureSpec::Graded { max_k: Some(k) } => write!(f, "graded:0..{k}"),
            SignatureSpec::Probabilistic {
                lower: true,
                strict: false,
            } => f.write_str("prob:auto-grid"),
            SignatureSpec::Probabilistic { lower: false, .. } => {
                f.write_str("prob:auto-grid-strict")
            }
            SignatureSpec::Probabilistic { .. } => f.write_str("prob:auto-grid-both"),
            SignatureSpec::Neighborhood => f.write_str("nbhd:box"),
        }
    }
}
