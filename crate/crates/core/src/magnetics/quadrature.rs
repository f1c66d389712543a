//! Fixed Gauss–Legendre rules on [0, 1].

/// 3-point rule: nodes (1 ± sqrt(3/5))/2 and 1/2.
pub(crate) const GL3_NODES: [f64; 3] = [
    0.112_701_665_379_258_31,
    0.5,
    0.887_298_334_620_741_7,
];
pub(crate) const GL3_WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];
