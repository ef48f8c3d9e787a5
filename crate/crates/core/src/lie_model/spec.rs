use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{Form, HermitianMetric, MAX_DIM};
use crate::linalg::CMat;

/// Model file contents: structure equations d e^k of the (1,0)-coframe and an
/// optional metric matrix. Conjugate equations are derived, never stated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub name: String,
    pub complex_dim: usize,
    #[serde(default)]
    pub structure: Vec<StructureEquation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureEquation {
    pub d_of: usize,
    pub terms: Vec<StructureTerm>,
}

/// coeff · e^{holo[0]}∧…∧ē^{anti[0]}∧… (generators wedged in the listed order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureTerm {
    pub coeff: [f64; 2],
    #[serde(default)]
    pub holo: Vec<usize>,
    #[serde(default)]
    pub anti: Vec<usize>,
}

fn default_schema() -> u32 {
    1
}

fn parse_err(context: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { context: context.into(), message: message.into() }
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<ModelSpec> {
        let spec: ModelSpec = serde_json::from_str(text)
            .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        spec.check_shape()?;
        Ok(spec)
    }

    pub fn from_path(path: &std::path::Path) -> Result<ModelSpec> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| parse_err(path.display().to_string(), e.to_string()))?;
        ModelSpec::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }

    /// Field-level checks that serde cannot express.
    fn check_shape(&self) -> Result<()> {
        if self.schema != 1 {
            return Err(parse_err("schema", format!("unsupported schema version {}", self.schema)));
        }
        let n = self.complex_dim;
        if n == 0 || n > MAX_DIM {
            return Err(parse_err("complex_dim", format!("{n} is outside 1..={MAX_DIM}")));
        }
        let mut seen = vec![false; n + 1];
        for (i, eq) in self.structure.iter().enumerate() {
            let ctx = format!("structure[{i}]");
            if eq.d_of == 0 || eq.d_of > n {
                return Err(parse_err(format!("{ctx}.d_of"), format!("{} is outside 1..={n}", eq.d_of)));
            }
            if seen[eq.d_of] {
                return Err(parse_err(format!("{ctx}.d_of"), format!("duplicate equation for e^{}", eq.d_of)));
            }
            seen[eq.d_of] = true;
            for (t, term) in eq.terms.iter().enumerate() {
                let tctx = format!("{ctx}.terms[{t}]");
                if !term.coeff.iter().all(|x| x.is_finite()) {
                    return Err(parse_err(format!("{tctx}.coeff"), "non-finite coefficient"));
                }
                if term.holo.len() + term.anti.len() != 2 {
                    return Err(parse_err(tctx, "each term must be a 2-form"));
                }
                for &k in term.holo.iter().chain(&term.anti) {
                    if k == 0 || k > n {
                        return Err(parse_err(tctx.clone(), format!("index {k} is outside 1..={n}")));
                    }
                }
            }
        }
        if let Some(m) = &self.metric {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(parse_err("metric", format!("expected a {n}x{n} matrix of [re, im] pairs")));
            }
        }
        Ok(())
    }

    /// d e^k for k = 1..n as forms.
    pub fn structure_forms(&self) -> Vec<Form> {
        let n = self.complex_dim;
        let mut de = vec![Form::zero(n); n];
        for eq in &self.structure {
            for term in &eq.terms {
                let z = Complex64::new(term.coeff[0], term.coeff[1]);
                de[eq.d_of - 1] += &Form::monomial(n, &term.holo, &term.anti).scale(z);
            }
        }
        de
    }

    /// The stated metric, or the identity.
    pub fn metric(&self) -> Result<HermitianMetric> {
        let n = self.complex_dim;
        match &self.metric {
            None => Ok(HermitianMetric::identity(n)),
            Some(rows) => {
                let h = CMat::from_fn(n, n, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1]));
                HermitianMetric::new(h)
            }
        }
    }

    /// Spec with the given structure forms d e^k (used to build specs programmatically).
    pub fn from_forms(name: &str, de: &[Form]) -> ModelSpec {
        let n = de.first().map(|f| f.dim()).unwrap_or(1);
        let structure = de
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero(0.0))
            .map(|(k, f)| StructureEquation {
                d_of: k + 1,
                terms: f
                    .terms()
                    .map(|(b, z)| StructureTerm { coeff: [z.re, z.im], holo: b.holo_indices(), anti: b.anti_indices() })
                    .collect(),
            })
            .collect();
        ModelSpec { schema: 1, name: name.to_string(), complex_dim: n, structure, metric: None }
    }
}

/// Bundled fixture files.
pub mod fixtures {
    pub const TORUS2: &str = include_str!("../../fixtures/torus2.json");
    pub const TORUS3: &str = include_str!("../../fixtures/torus3.json");
    pub const IWASAWA: &str = include_str!("../../fixtures/iwasawa.json");
    pub const KODAIRA_THURSTON: &str = include_str!("../../fixtures/kodaira_thurston.json");
    /// Step-2 nilmanifold whose first harmonic deformation direction is obstructed at order 2.
    pub const STEP2_OBSTRUCTED: &str = include_str!("../../fixtures/step2_obstructed.json");

    pub fn by_name(name: &str) -> Option<&'static str> {
        match name {
            "torus2" => Some(TORUS2),
            "torus3" => Some(TORUS3),
            "iwasawa" => Some(IWASAWA),
            "kodaira_thurston" => Some(KODAIRA_THURSTON),
            "step2_obstructed" => Some(STEP2_OBSTRUCTED),
            _ => None,
        }
    }

    pub const NAMES: [&str; 5] = ["torus2", "torus3", "iwasawa", "kodaira_thurston", "step2_obstructed"];
}
