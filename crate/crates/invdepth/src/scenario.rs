//! Scenario files: a TOML description of a prime, a matrix group by
//! generators, and the optional inputs (cutoff, sequences, subspaces,
//! theorem selection, seed) the pipeline consumes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldPrime;
use crate::linalg::MatFp;
use crate::matgroup::{MatrixGroup, Subspace, DEFAULT_ORDER_CAP};
use crate::poly::{Monomial, Polynomial};

pub const DEFAULT_CUTOFF: u32 = 8;
pub const DEFAULT_SEED: u64 = 0;

/// One term of a polynomial given as an exponent vector and a coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub exponents: Vec<u16>,
    pub coeff: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySpec {
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub p: u32,
    pub n: usize,
    /// row-major n×n matrices, entries reduced mod p
    pub generators: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorems: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequences: Option<Vec<PolySpec>>,
    /// each subspace is a list of spanning vectors
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspaces: Option<Vec<Vec<Vec<u32>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn from_str(text: &str) -> Result<Scenario> {
        let s: Scenario =
            toml::from_str(text).map_err(|e| Error::Input(format!("scenario parse error: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_path(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        Scenario::from_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        FieldPrime::new(self.p).map_err(|_| Error::Input(format!("{} is not prime", self.p)))?;
        if self.n == 0 {
            return Err(Error::Input("n must be positive".into()));
        }
        if self.generators.is_empty() {
            return Err(Error::Input("at least one generator is required".into()));
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.len() != self.n * self.n {
                return Err(Error::Input(format!(
                    "generator {i} has {} entries, expected {}",
                    g.len(),
                    self.n * self.n
                )));
            }
            let m = self.matrix(g);
            if m.inverse().is_none() {
                return Err(Error::Input(format!("generator {i} is singular mod {}", self.p)));
            }
        }
        if let Some(seqs) = &self.sequences {
            for (i, s) in seqs.iter().enumerate() {
                for t in &s.terms {
                    if t.exponents.len() != self.n {
                        return Err(Error::Input(format!(
                            "sequence {i}: exponent vector length {} ≠ n = {}",
                            t.exponents.len(),
                            self.n
                        )));
                    }
                    if t.exponents.iter().all(|&e| e == 0) {
                        return Err(Error::Input(format!(
                            "sequence {i} contains a constant term; degrees must be ≥ 1"
                        )));
                    }
                }
            }
        }
        if let Some(subs) = &self.subspaces {
            for (i, rows) in subs.iter().enumerate() {
                for v in rows {
                    if v.len() != self.n {
                        return Err(Error::Input(format!(
                            "subspace {i}: vector length {} ≠ n = {}",
                            v.len(),
                            self.n
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn matrix(&self, flat: &[u32]) -> MatFp {
        let rows = flat
            .chunks(self.n)
            .map(|r| r.iter().map(|&x| x % self.p).collect())
            .collect();
        MatFp::from_rows(self.p, rows)
    }

    pub fn group(&self) -> Result<MatrixGroup> {
        let gens = self.generators.iter().map(|g| self.matrix(g)).collect();
        MatrixGroup::enumerate(self.p, self.n, gens, DEFAULT_ORDER_CAP)
    }

    pub fn cutoff_or_default(&self, flag: Option<u32>) -> u32 {
        flag.or(self.cutoff).unwrap_or(DEFAULT_CUTOFF)
    }

    pub fn seed_or_default(&self, flag: Option<u64>) -> u64 {
        flag.or(self.seed).unwrap_or(DEFAULT_SEED)
    }

    pub fn parsed_sequences(&self) -> Result<Vec<Vec<Polynomial>>> {
        // each PolySpec is one polynomial; the whole list is one sequence
        let mut out = Vec::new();
        if let Some(seqs) = &self.sequences {
            let mut seq = Vec::new();
            for s in seqs {
                let mut f = Polynomial::zero(self.p, self.n);
                for t in &s.terms {
                    let mono = Polynomial::from_terms(
                        self.p,
                        self.n,
                        vec![(Monomial(t.exponents.clone()), t.coeff % self.p)],
                    );
                    f = f.add(&mono)?;
                }
                seq.push(f);
            }
            out.push(seq);
        }
        Ok(out)
    }

    pub fn parsed_subspaces(&self) -> Vec<Subspace> {
        self.subspaces
            .as_ref()
            .map(|subs| {
                subs.iter()
                    .map(|rows| Subspace::from_spanning(self.p, self.n, rows.clone()))
                    .collect()
            })
            .unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal() {
        let s = Scenario::from_str("p = 2\nn = 2\ngenerators = [[0,1,1,0]]\n").unwrap();
        assert_eq!(s.p, 2);
        let g = s.group().unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn singular_generator_named() {
        let err = Scenario::from_str("p = 2\nn = 2\ngenerators = [[1,0,1,0]]\n").unwrap_err();
        match err {
            Error::Input(msg) => assert!(msg.contains("generator 0"), "{msg}"),
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn bad_entry_count() {
        let err = Scenario::from_str("p = 2\nn = 2\ngenerators = [[1,0,0]]\n").unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn sequences_parse() {
        let text = r#"
p = 2
n = 2
generators = [[0,1,1,0]]
[[sequences]]
terms = [{ exponents = [1,0], coeff = 1 }, { exponents = [0,1], coeff = 1 }]
[[sequences]]
terms = [{ exponents = [1,1], coeff = 1 }]
"#;
        let s = Scenario::from_str(text).unwrap();
        let seqs = s.parsed_sequences().unwrap();
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].len(), 2);
        assert_eq!(seqs[0][0].degree(), Some(1));
        assert_eq!(seqs[0][1].degree(), Some(2));
    }

    #[test]
    fn constant_term_rejected() {
        let text = r#"
p = 2
n = 2
generators = [[0,1,1,0]]
[[sequences]]
terms = [{ exponents = [0,0], coeff = 1 }]
"#;
        assert!(Scenario::from_str(text).is_err());
    }
}
