//! Generative models G: B_2^k(r) -> R^n, their evaluation, differentiation,
//! Lipschitz bounds, and a portable weights-file format.
//!
//! Two families are supported: linear maps z -> Bz and fully-connected MLPs
//! with relu / sigmoid / tanh / identity activations. Generators are
//! immutable after construction and safe to evaluate from many threads.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Relative tolerance of the ball membership test.
const MEMBERSHIP_TOL: f64 = 1e-12;

/// Whether latent inputs are required to lie in the domain ball.
///
/// `Strict` rejects out-of-ball inputs; `Unchecked` evaluates anyway and is
/// flagged as such in downstream results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainMode {
    Strict,
    Unchecked,
}

/// The latent domain B_2^k(r).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatentBall {
    k: usize,
    radius: f64,
}

impl LatentBall {
    pub fn new(k: usize, radius: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::Validation("latent dimension k must be >= 1".into()));
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::Validation(format!(
                "latent ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(LatentBall { k, radius })
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Membership test ||z||_2 <= r, up to relative tolerance 1e-12.
    pub fn contains(&self, z: &[f64]) -> bool {
        z.len() == self.k && linalg::norm2(z) <= self.radius * (1.0 + MEMBERSHIP_TOL)
    }

    /// Radially project z into the ball (no-op if already inside).
    pub fn clip(&self, z: &mut [f64]) {
        let n = linalg::norm2(z);
        if n > self.radius {
            let f = self.radius / n;
            for v in z.iter_mut() {
                *v *= f;
            }
        }
    }

    fn check(&self, z: &[f64], mode: DomainMode) -> Result<()> {
        if z.len() != self.k {
            return Err(Error::DimensionMismatch {
                context: "latent input".into(),
                expected: self.k,
                actual: z.len(),
            });
        }
        if mode == DomainMode::Strict && !self.contains(z) {
            return Err(Error::DomainViolation {
                norm: linalg::norm2(z),
                radius: self.radius,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Sigmoid,
    Tanh,
    None,
}

impl Activation {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "relu" => Ok(Activation::Relu),
            "sigmoid" => Ok(Activation::Sigmoid),
            "tanh" => Ok(Activation::Tanh),
            "none" => Ok(Activation::None),
            other => Err(Error::UnsupportedActivation(other.into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
            Activation::None => "none",
        }
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Sigmoid => sigmoid(x),
            Activation::Tanh => x.tanh(),
            Activation::None => x,
        }
    }

    /// Derivative at pre-activation x. Convention: relu'(0) = 0.
    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => {
                let s = sigmoid(x);
                s * (1.0 - s)
            }
            Activation::Tanh => {
                let t = x.tanh();
                1.0 - t * t
            }
            Activation::None => 1.0,
        }
    }

    /// Lipschitz constant of the scalar activation.
    pub fn lipschitz_factor(&self) -> f64 {
        match self {
            Activation::Sigmoid => 0.25,
            _ => 1.0,
        }
    }
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Linear generator z -> Bz with B an n x k matrix, n >= k.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearGenerator {
    matrix: Matrix,
    domain: LatentBall,
}

impl LinearGenerator {
    pub fn new(matrix: Matrix, domain: LatentBall) -> Result<Self> {
        if matrix.cols() != domain.dim() {
            return Err(Error::DimensionMismatch {
                context: "linear generator matrix columns vs latent dimension".into(),
                expected: domain.dim(),
                actual: matrix.cols(),
            });
        }
        if matrix.rows() < matrix.cols() {
            return Err(Error::Validation(format!(
                "linear generator requires n >= k, got n = {}, k = {}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::Validation(
                "linear generator matrix has non-finite entries".into(),
            ));
        }
        Ok(LinearGenerator { matrix, domain })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn domain(&self) -> &LatentBall {
        &self.domain
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpLayer {
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

/// Fully-connected generator: alternating affine maps and activations.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGenerator {
    layers: Vec<MlpLayer>,
    domain: LatentBall,
}

impl MlpGenerator {
    pub fn new(layers: Vec<MlpLayer>, domain: LatentBall) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Validation("mlp generator needs at least one layer".into()));
        }
        let mut prev_out = domain.dim();
        for (i, layer) in layers.iter().enumerate() {
            if layer.weights.cols() != prev_out {
                return Err(Error::DimensionChain {
                    layer: i,
                    expected: prev_out,
                    actual: layer.weights.cols(),
                });
            }
            if layer.bias.len() != layer.weights.rows() {
                return Err(Error::DimensionMismatch {
                    context: format!("layer {i} bias"),
                    expected: layer.weights.rows(),
                    actual: layer.bias.len(),
                });
            }
            if !layer.weights.is_finite() || !layer.bias.iter().all(|v| v.is_finite()) {
                return Err(Error::Validation(format!("layer {i} has non-finite parameters")));
            }
            prev_out = layer.weights.rows();
        }
        Ok(MlpGenerator { layers, domain })
    }

    pub fn layers(&self) -> &[MlpLayer] {
        &self.layers
    }

    pub fn domain(&self) -> &LatentBall {
        &self.domain
    }
}

/// A generative model, either linear or MLP.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Linear(LinearGenerator),
    Mlp(MlpGenerator),
}

impl Generator {
    pub fn domain(&self) -> &LatentBall {
        match self {
            Generator::Linear(g) => g.domain(),
            Generator::Mlp(g) => g.domain(),
        }
    }

    pub fn latent_dim(&self) -> usize {
        self.domain().dim()
    }

    pub fn radius(&self) -> f64 {
        self.domain().radius()
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Generator::Linear(g) => g.matrix.rows(),
            Generator::Mlp(g) => g.layers.last().unwrap().weights.rows(),
        }
    }

    pub fn as_linear(&self) -> Option<&LinearGenerator> {
        match self {
            Generator::Linear(g) => Some(g),
            Generator::Mlp(_) => None,
        }
    }

    /// Evaluate G(z). Deterministic; the linear case is exactly Bz.
    pub fn forward(&self, z: &[f64], mode: DomainMode) -> Result<Vec<f64>> {
        self.domain().check(z, mode)?;
        Ok(match self {
            Generator::Linear(g) => g.matrix.matvec(z),
            Generator::Mlp(g) => {
                let mut h = z.to_vec();
                for layer in &g.layers {
                    let mut pre = layer.weights.matvec(&h);
                    for (p, b) in pre.iter_mut().zip(&layer.bias) {
                        *p += b;
                    }
                    for p in pre.iter_mut() {
                        *p = layer.activation.apply(*p);
                    }
                    h = pre;
                }
                h
            }
        })
    }

    /// J^T u, where J is the Jacobian of `forward` at z.
    ///
    /// Activations are differentiated almost everywhere with the relu
    /// subgradient at 0 taken to be 0.
    pub fn jacobian_vector_product(&self, z: &[f64], u: &[f64], mode: DomainMode) -> Result<Vec<f64>> {
        self.domain().check(z, mode)?;
        if u.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "jacobian_vector_product cotangent".into(),
                expected: self.ambient_dim(),
                actual: u.len(),
            });
        }
        match self {
            Generator::Linear(g) => Ok(g.matrix.matvec_t(u)),
            Generator::Mlp(g) => {
                // Forward pass storing pre-activations.
                let mut pres: Vec<Vec<f64>> = Vec::with_capacity(g.layers.len());
                let mut h = z.to_vec();
                for layer in &g.layers {
                    let mut pre = layer.weights.matvec(&h);
                    for (p, b) in pre.iter_mut().zip(&layer.bias) {
                        *p += b;
                    }
                    h = pre.iter().map(|&p| layer.activation.apply(p)).collect();
                    pres.push(pre);
                }
                // Backward pass: v <- W^T (act'(pre) .* v).
                let mut v = u.to_vec();
                for (layer, pre) in g.layers.iter().zip(&pres).rev() {
                    for (vi, &p) in v.iter_mut().zip(pre) {
                        *vi *= layer.activation.derivative(p);
                    }
                    v = layer.weights.matvec_t(&v);
                }
                Ok(v)
            }
        }
    }

    /// Upper bound on the Lipschitz constant of `forward` on the domain.
    ///
    /// Exact (largest singular value) for linear generators; the product of
    /// per-layer spectral norms times activation Lipschitz factors for MLPs.
    /// Spectral norms come from power iteration with relative tolerance
    /// 1e-8, a 1000-iteration cap, and a deterministic start vector.
    pub fn lipschitz_bound(&self) -> f64 {
        match self {
            Generator::Linear(g) => linalg::spectral_norm(&g.matrix, 1e-8, 1000),
            Generator::Mlp(g) => g
                .layers
                .iter()
                .map(|l| {
                    linalg::spectral_norm(&l.weights, 1e-8, 1000) * l.activation.lipschitz_factor()
                })
                .product(),
        }
    }

    pub fn range(&self) -> GeneratorRange<'_> {
        GeneratorRange { gen: self }
    }
}

/// The range R(G) = G(B_2^k(r)), viewed as a set of witnessed points.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorRange<'a> {
    gen: &'a Generator,
}

/// A point of the range together with the latent witness that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RangePoint {
    pub w: Vec<f64>,
    pub z: Vec<f64>,
}

impl<'a> GeneratorRange<'a> {
    /// Materialize the range point G(z); every emitted point is
    /// `forward(z)` for its stored witness by construction.
    pub fn point(&self, z: &[f64], mode: DomainMode) -> Result<RangePoint> {
        let w = self.gen.forward(z, mode)?;
        Ok(RangePoint { w, z: z.to_vec() })
    }

    pub fn generator(&self) -> &'a Generator {
        self.gen
    }
}

// ---- Weights file format ----
//
// Structured text (JSON), all numbers decimal with 17 significant digits so
// a save -> load round trip reproduces every f64 bit-exactly:
//
//   {"kind": "linear", "radius": r, "matrix": [[row], [row], ...]}
//   {"kind": "mlp", "radius": r,
//    "layers": [{"weights": [[out x in rows]], "bias": [...],
//                "activation": "relu"}, ...]}

#[derive(Serialize, Deserialize)]
struct GeneratorFile {
    kind: String,
    radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layers: Option<Vec<LayerFile>>,
}

#[derive(Serialize, Deserialize)]
struct LayerFile {
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
    activation: String,
}

pub fn load_generator(path: impl AsRef<Path>) -> Result<Generator> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    parse_generator(&text).map_err(|e| match e {
        Error::Parse { detail, .. } => Error::Parse {
            path: path.display().to_string(),
            detail,
        },
        other => other,
    })
}

pub fn parse_generator(text: &str) -> Result<Generator> {
    let file: GeneratorFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: "<generator>".into(),
        detail: e.to_string(),
    })?;
    match file.kind.as_str() {
        "linear" => {
            let rows = file.matrix.ok_or_else(|| Error::Validation(
                "linear generator file missing 'matrix' field".into(),
            ))?;
            let matrix = Matrix::from_rows(&rows)?;
            let domain = LatentBall::new(matrix.cols(), file.radius)?;
            Ok(Generator::Linear(LinearGenerator::new(matrix, domain)?))
        }
        "mlp" => {
            let layer_files = file.layers.ok_or_else(|| Error::Validation(
                "mlp generator file missing 'layers' field".into(),
            ))?;
            let mut layers = Vec::with_capacity(layer_files.len());
            for lf in &layer_files {
                layers.push(MlpLayer {
                    weights: Matrix::from_rows(&lf.weights)?,
                    bias: lf.bias.clone(),
                    activation: Activation::from_name(&lf.activation)?,
                });
            }
            let k = layers[0].weights.cols();
            let domain = LatentBall::new(k, file.radius)?;
            Ok(Generator::Mlp(MlpGenerator::new(layers, domain)?))
        }
        other => Err(Error::Validation(format!(
            "unknown generator kind '{other}' (expected 'linear' or 'mlp')"
        ))),
    }
}

pub fn save_generator(gen: &Generator, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_generator(gen))?;
    Ok(())
}

/// Render to the weights-file text format (17 significant digits).
pub fn render_generator(gen: &Generator) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    match gen {
        Generator::Linear(g) => {
            out.push_str("  \"kind\": \"linear\",\n");
            out.push_str(&format!("  \"radius\": {},\n", fmt_f64(g.domain.radius())));
            out.push_str("  \"matrix\": ");
            render_rows(&mut out, &g.matrix, 2);
            out.push('\n');
        }
        Generator::Mlp(g) => {
            out.push_str("  \"kind\": \"mlp\",\n");
            out.push_str(&format!("  \"radius\": {},\n", fmt_f64(g.domain.radius())));
            out.push_str("  \"layers\": [\n");
            for (i, layer) in g.layers.iter().enumerate() {
                out.push_str("    {\n");
                out.push_str("      \"weights\": ");
                render_rows(&mut out, &layer.weights, 6);
                out.push_str(",\n      \"bias\": [");
                for (j, b) in layer.bias.iter().enumerate() {
                    if j > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&fmt_f64(*b));
                }
                out.push_str("],\n");
                out.push_str(&format!(
                    "      \"activation\": \"{}\"\n",
                    layer.activation.name()
                ));
                out.push_str(if i + 1 < g.layers.len() { "    },\n" } else { "    }\n" });
            }
            out.push_str("  ]\n");
        }
    }
    out.push_str("}\n");
    out
}

fn render_rows(out: &mut String, m: &Matrix, indent: usize) {
    let pad = " ".repeat(indent);
    out.push_str("[\n");
    for r in 0..m.rows() {
        out.push_str(&pad);
        out.push_str("  [");
        for (c, v) in m.row(r).iter().enumerate() {
            if c > 0 {
                out.push_str(", ");
            }
            out.push_str(&fmt_f64(*v));
        }
        out.push_str(if r + 1 < m.rows() { "],\n" } else { "]\n" });
    }
    out.push_str(&pad);
    out.push(']');
}

/// Decimal with 17 significant digits: enough to reproduce any f64 exactly.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Shared handle used where generators are evaluated from multiple threads.
pub type SharedGenerator = Arc<Generator>;
