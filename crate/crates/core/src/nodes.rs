//! Nodal instances: generation of the `x0*g + x1*f` family, node checks and
//! instance files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{self, PointSet, PointSetFile, ProjectivePoint};
use crate::linalg;
use crate::poly::{FormFile, HomogeneousForm};
use crate::scalar::{FieldSpec, Scalar, SeededRng};

/// Attempts before [`example11`] gives up on drawing a generic instance.
pub const GENERATION_RETRIES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Example11,
    Ingested,
    Synthetic,
}

/// A degree-`n` hypersurface in `P^4` (optionally with its equation) and a
/// list of its nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodalInstance {
    pub n: u32,
    pub field: FieldSpec,
    pub form: Option<HomogeneousForm>,
    pub nodes: PointSet,
    pub provenance: Provenance,
    pub notes: Vec<String>,
}

/// Caches first and second partials of `F` for repeated node tests.
pub struct NodeChecker {
    gradient: Vec<HomogeneousForm>,
    hessian: Vec<Vec<HomogeneousForm>>,
    dim: usize,
}

impl NodeChecker {
    pub fn new(form: &HomogeneousForm) -> Self {
        let gradient = form.partial_derivatives();
        let hessian = gradient.iter().map(|g| g.partial_derivatives()).collect();
        NodeChecker {
            gradient,
            hessian,
            dim: form.dim(),
        }
    }

    /// `Ok(())` if `q` is an ordinary double point, else the reason it is not.
    pub fn check(&self, q: &ProjectivePoint) -> Result<std::result::Result<(), String>> {
        for (i, g) in self.gradient.iter().enumerate() {
            if !g.evaluate(q)?.is_zero() {
                return Ok(Err(format!("dF/dx{i} does not vanish")));
            }
        }
        let h: Vec<Vec<Scalar>> = self
            .hessian
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.evaluate(q))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let r = linalg::rank(q.field(), &h);
        if r == self.dim {
            Ok(Ok(()))
        } else {
            Ok(Err(format!("Hessian rank {r}, expected {}", self.dim)))
        }
    }
}

/// Whether `q` is a node of `{F = 0}`: vanishing gradient and a Hessian of
/// corank one (full rank is impossible at a singular point by Euler).
pub fn is_node(form: &HomogeneousForm, q: &ProjectivePoint) -> Result<bool> {
    if form.degree() < 2 {
        return Err(Error::InvalidArgument("node test needs degree >= 2".into()));
    }
    Ok(NodeChecker::new(form).check(q)?.is_ok())
}

fn random_ternary_linear(field: FieldSpec, rng: &mut SeededRng) -> [Scalar; 3] {
    loop {
        let c = [field.random(rng), field.random(rng), field.random(rng)];
        if c.iter().any(|x| !x.is_zero()) {
            return c;
        }
    }
}

fn lift_linear(field: FieldSpec, c: &[Scalar; 3]) -> HomogeneousForm {
    let mut coeffs = vec![field.zero(), field.zero()];
    coeffs.extend(c.iter().cloned());
    HomogeneousForm::linear(field, &coeffs)
}

fn cross(a: &[Scalar; 3], b: &[Scalar; 3]) -> [Scalar; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// The hypersurface `x0*g + x1*f = 0` with `g`, `f` products of `n - 1`
/// random linear forms in `x2, x3, x4`; its listed nodes are the `(n-1)^2`
/// crossings of the two line arrangements on the plane `x0 = x1 = 0`.
pub fn example11(n: u32, field: FieldSpec, rng: &mut SeededRng) -> Result<NodalInstance> {
    if !(4..=8).contains(&n) {
        return Err(Error::InvalidArgument(format!("n = {n} outside 4..=8")));
    }
    if !field.is_prime_field() {
        return Err(Error::InvalidArgument(
            "the generator works over F_p".into(),
        ));
    }
    let m = (n - 1) as usize;
    for _ in 0..GENERATION_RETRIES {
        let a: Vec<[Scalar; 3]> = (0..m).map(|_| random_ternary_linear(field, rng)).collect();
        let b: Vec<[Scalar; 3]> = (0..m).map(|_| random_ternary_linear(field, rng)).collect();

        let mut points = Vec::with_capacity(m * m);
        let mut labels = Vec::with_capacity(m * m);
        let mut degenerate = false;
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                let c = cross(ai, bj);
                let mut coords = vec![field.zero(), field.zero()];
                coords.extend(c);
                match ProjectivePoint::new(coords) {
                    Ok(p) => points.push(p),
                    Err(Error::ZeroPoint) => {
                        degenerate = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
                labels.push(format!("q{i}_{j}"));
            }
            if degenerate {
                break;
            }
        }
        if degenerate {
            continue;
        }
        let Ok(nodes) = PointSet::new(field, 4, points, labels) else {
            continue;
        };

        let product = |ls: &[[Scalar; 3]]| {
            ls.iter()
                .fold(HomogeneousForm::constant(field.one(), 4), |acc, l| {
                    acc.mul(&lift_linear(field, l)).expect("same ring")
                })
        };
        let g = product(&a);
        let f = product(&b);
        let form = HomogeneousForm::variable(field, 4, 0)
            .mul(&g)?
            .add(&HomogeneousForm::variable(field, 4, 1).mul(&f)?)?;

        let checker = NodeChecker::new(&form);
        let mut all_nodes = true;
        for p in nodes.points() {
            if checker.check(p)?.is_err() {
                all_nodes = false;
                break;
            }
        }
        if !all_nodes {
            continue;
        }
        let collinear = geom::max_points_in_flat(&nodes, 1, geom::DEFAULT_BUDGET)?;
        if collinear.count > m {
            continue;
        }
        return Ok(NodalInstance {
            n,
            field,
            form: Some(form),
            nodes,
            provenance: Provenance::Example11,
            notes: vec![
                format!("all {} listed nodes lie on the plane x0 = x1 = 0", m * m),
                "singular points off that plane are not searched for".into(),
            ],
        });
    }
    Err(Error::GenericityFailure(format!(
        "no generic x0*g + x1*f of degree {n} after {GENERATION_RETRIES} draws"
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum NodeStatus {
    Verified,
    Failed { reason: String },
    Unverified,
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeVerification {
    pub label: String,
    #[serde(flatten)]
    pub status: NodeStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub n: u32,
    pub node_count: usize,
    pub form_present: bool,
    pub all_verified: bool,
    pub nodes: Vec<NodeVerification>,
    pub notes: Vec<String>,
}

/// Re-check every instance invariant and report per-node status.
pub fn verify_instance(inst: &NodalInstance) -> Result<InstanceReport> {
    let mut notes = inst.notes.clone();
    let nodes = match &inst.form {
        Some(form) => {
            if form.degree() != inst.n {
                return Err(Error::InvariantViolation {
                    label: "form".into(),
                    reason: format!("degree {} but n = {}", form.degree(), inst.n),
                });
            }
            let checker = NodeChecker::new(form);
            inst.nodes
                .iter()
                .map(|(label, p)| {
                    Ok(NodeVerification {
                        label: label.to_string(),
                        status: match checker.check(p)? {
                            Ok(()) => NodeStatus::Verified,
                            Err(reason) => NodeStatus::Failed { reason },
                        },
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => {
            notes.push("no equation supplied: node checks skipped (unverified)".into());
            inst.nodes
                .labels()
                .iter()
                .map(|l| NodeVerification {
                    label: l.clone(),
                    status: NodeStatus::Unverified,
                })
                .collect()
        }
    };
    let all_verified = nodes.iter().all(|n| n.status == NodeStatus::Verified);
    Ok(InstanceReport {
        n: inst.n,
        node_count: inst.nodes.len(),
        form_present: inst.form.is_some(),
        all_verified,
        nodes,
        notes,
    })
}

impl NodalInstance {
    /// Instance from a bare node list (no equation).
    pub fn from_nodes(n: u32, nodes: PointSet, provenance: Provenance) -> Self {
        NodalInstance {
            n,
            field: nodes.field(),
            form: None,
            nodes,
            provenance,
            notes: Vec::new(),
        }
    }

    /// Fails with the first offending node label if the equation is present
    /// and some listed node is not a node of it.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.dim() != 4 {
            return Err(Error::InvariantViolation {
                label: "nodes".into(),
                reason: format!("nodes live in P^{}, expected P^4", self.nodes.dim()),
            });
        }
        let report = verify_instance(self)?;
        if let Some(bad) = report
            .nodes
            .iter()
            .find(|n| matches!(n.status, NodeStatus::Failed { .. }))
        {
            let NodeStatus::Failed { reason } = &bad.status else {
                unreachable!()
            };
            return Err(Error::InvariantViolation {
                label: bad.label.clone(),
                reason: reason.clone(),
            });
        }
        Ok(())
    }

    /// Copy with one node removed.
    pub fn without_node(&self, label: &str) -> Result<NodalInstance> {
        let mut out = self.clone();
        out.nodes = self.nodes.without(label)?;
        out.notes.push(format!("node {label} removed"));
        Ok(out)
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            n: self.n,
            field: self.field,
            form: self.form.as_ref().map(HomogeneousForm::to_file),
            nodes: PointSetFile::from_set(&self.nodes),
            provenance: self.provenance,
            notes: self.notes.clone(),
        }
    }

    pub fn from_file(file: &InstanceFile) -> Result<Self> {
        let nodes = file.nodes.to_set()?;
        if nodes.field() != file.field {
            return Err(Error::FieldMismatch {
                left: file.field.to_string(),
                right: nodes.field().to_string(),
            });
        }
        let form = file
            .form
            .as_ref()
            .map(|f| HomogeneousForm::from_file(file.field, f))
            .transpose()?;
        let inst = NodalInstance {
            n: file.n,
            field: file.field,
            form,
            nodes,
            provenance: file.provenance,
            notes: file.notes.clone(),
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }
}

/// Instance file: `{"n", "field", "form"?, "nodes", "provenance"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: u32,
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormFile>,
    pub nodes: PointSetFile,
    #[serde(default = "default_provenance")]
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn default_provenance() -> Provenance {
    Provenance::Ingested
}

pub fn load_nodes(path: impl AsRef<Path>) -> Result<NodalInstance> {
    let text = std::fs::read_to_string(path)?;
    NodalInstance::from_json(&text)
}

pub fn save_instance(inst: &NodalInstance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, inst.to_json()? + "\n")?;
    Ok(())
}
