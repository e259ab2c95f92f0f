//! Machine-readable outcome of the bilinear checks.

#[derive(Clone, Debug)]
pub struct HqeCoefficient {
    /// Power of the boundary polynomial in the reduced family.
    pub n: u32,
    pub hbar: u32,
    pub monomial: String,
    pub value: String,
    pub abs: Option<f64>,
    pub trusted: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct HqeReport {
    /// Nonzero residual coefficients (bounded sample), most useful first.
    pub coefficients: Vec<HqeCoefficient>,
    pub trusted_failed: usize,
    pub pass: bool,
}

impl HqeReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pass": self.pass,
            "trusted_failed": self.trusted_failed,
            "coefficients": self.coefficients.iter().map(|c| serde_json::json!({
                "n": c.n,
                "hbar": c.hbar,
                "monomial": c.monomial,
                "value": c.value,
                "abs": c.abs,
                "trusted": c.trusted,
                "pass": c.pass,
            })).collect::<Vec<_>>(),
        })
    }
}
