//! The polytope file format: `{"d": 4, "tau": [0, 2, 3, 5, 8]}`.
//!
//! Parameters beyond the 64-bit range are written as decimal strings; either
//! form is accepted on input.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::polytope::{build_polytope, CyclicPolytope, ParameterList};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    pub d: usize,
    #[serde(with = "arith::json_int_vec")]
    pub tau: Vec<BigInt>,
}

impl PolytopeSpec {
    pub fn from_params(params: &ParameterList) -> Self {
        PolytopeSpec {
            d: params.d(),
            tau: params.taus().to_vec(),
        }
    }

    pub fn params(&self) -> Result<ParameterList> {
        ParameterList::new(self.d, self.tau.clone())
    }

    pub fn polytope(&self) -> Result<CyclicPolytope> {
        Ok(build_polytope(self.params()?))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

pub fn parse_spec(text: &str) -> Result<PolytopeSpec> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_spec(path: &Path) -> Result<PolytopeSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_spec(&text)
}
