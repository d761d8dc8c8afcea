/// Deliberate defects that can be switched on to show the verification suites are not vacuous.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Faults {
    /// Negates the `½ Σ γ(j)γ(k-j)` summand of `L(k)` for `k > 0`.
    pub flip_virasoro_sign: bool,
    /// Builds the coproduct without the `1/p(v)` normalization.
    pub drop_p_normalization: bool,
}

impl Faults {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn any(&self) -> bool {
        self.flip_virasoro_sign || self.drop_p_normalization
    }
}
