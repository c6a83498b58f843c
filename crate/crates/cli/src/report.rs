//! Report builders. Every command produces a `serde_json::Value` whose key
//! order is fixed by construction; text output is rendered from it.

use pfspace_core::channels::embed_classical;
use pfspace_core::numerics::rank;
use pfspace_core::pf::{
    analyze, classical_pf, cw_bounds, cw_certify, eigenspace, irreducibility_certificates, is_irreducible, pf_left,
};
use pfspace_core::qec::analyze_code;
use pfspace_core::structure::{verify_structure, Inclusion};
use pfspace_core::{CMatrix, Tolerances};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::spec::{ChannelSpec, ClassicalSpec, MatrixSpec, ProjectionSpec};

/// Options shared by every command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub tol: Tolerances,
    pub seed: u64,
    pub samples: usize,
    pub max_dim: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { tol: Tolerances::default(), seed: 42, samples: 64, max_dim: 8 }
    }
}

/// A scalar rounded to 12 significant digits, `-0` folded to `0` and
/// non-finite values mapped to `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    json!(if r == 0.0 { 0.0 } else { r })
}

fn fixed(x: f64) -> f64 {
    let r: f64 = format!("{x:.12}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Row-major `[re, im]` pairs rounded to 12 decimals.
pub fn mat(m: &CMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(|z| json!([fixed(z.re), fixed(z.im)])).collect()))
        .collect();
    Value::Array(rows)
}

fn vector(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| json!(fixed(x))).collect())
}

fn inclusion(i: &Option<Inclusion>) -> Value {
    match i {
        Some(i) => json!({ "forward": num(i.forward), "backward": num(i.backward) }),
        None => Value::Null,
    }
}

fn tolerances(s: &Settings) -> Value {
    json!({
        "residual": num(s.tol.residual),
        "psd_floor": num(s.tol.psd_floor),
        "rank_cut": num(s.tol.rank_cut),
        "eig_cluster": num(s.tol.eig_cluster),
    })
}

fn header(command: &str, theorem: &str, s: &Settings) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("paper_theorem".into(), json!(theorem));
    m.insert("seed".into(), json!(s.seed));
    m.insert("samples".into(), json!(s.samples));
    m.insert("tolerances".into(), tolerances(s));
    m
}

pub fn cmd_analyze(spec: &ChannelSpec, s: &Settings) -> Result<Value, CliError> {
    let ch = spec.to_channel(s.max_dim)?;
    let a = analyze(&ch, &s.tol)?;
    let cert = irreducibility_certificates(&ch, s.samples, s.seed, &s.tol);
    let mut m = header("analyze", "Perron-Frobenius theorem for completely positive maps", s);
    m.insert("input".into(), json!({ "channel": spec }));
    m.insert("r".into(), num(a.r));
    m.insert("eigenspace_dim".into(), json!(a.eig_space_basis.len()));
    m.insert("pole_order".into(), json!(a.pole_order));
    m.insert("p_max_rank".into(), json!(a.p_max_rank));
    m.insert("zeta_rank".into(), json!(a.zeta_rank));
    m.insert(
        "irreducibility".into(),
        json!({
            "irreducible": cert.burnside,
            "burnside": cert.burnside,
            "b_join": cert.b_join,
            "cond7": cert.cond7,
            "cond8": cert.cond8,
            "concordant": cert.concordant(),
            "test_projections": cert.test_projections,
            "test_pairs": cert.test_pairs,
        }),
    );
    m.insert(
        "residuals".into(),
        json!({
            "right": num(a.residuals.right),
            "left": num(a.residuals.left),
            "zeta": num(a.residuals.zeta),
            "cesaro_gap": a.residuals.cesaro_gap.map_or(Value::Null, num),
        }),
    );
    m.insert("right_eigenvector".into(), mat(&a.right_eig));
    m.insert("left_eigenvector".into(), mat(&a.left_eig));
    m.insert("p_max".into(), mat(&a.p_max));
    m.insert("zeta".into(), mat(&a.zeta));
    Ok(Value::Object(m))
}

pub fn cmd_qec(errors: &ChannelSpec, code: &ProjectionSpec, s: &Settings) -> Result<Value, CliError> {
    let ch = errors.to_channel(s.max_dim)?;
    let p = code.to_projection(s.max_dim, &s.tol)?;
    if p.rows() != ch.dim() {
        return Err(CliError::Invalid(format!("code dimension {} does not match errors dimension {}", p.rows(), ch.dim())));
    }
    let rep = analyze_code(&ch, &p, s.seed, &s.tol)?;
    let block = &rep.correctable_block;
    let mut m = header("qec", "Error correction from the Perron-Frobenius eigenvector of the recovered errors", s);
    m.insert("input".into(), json!({ "errors": errors, "code": code }));
    m.insert("code_rank".into(), json!(rank(&p, &s.tol)));
    m.insert("kl_holds".into(), json!(rep.kl_holds()));
    m.insert("kl_residual".into(), num(rep.kl.residual));
    m.insert("kl_lambda".into(), mat(&rep.kl.lambda));
    m.insert("c".into(), num(rep.c));
    m.insert("r".into(), num(rep.r));
    m.insert("s".into(), num(rep.s));
    m.insert("bound_r_ge_s_over_c".into(), json!(rep.bound_holds(1e-8)));
    m.insert("logical_qubits".into(), num(block.logical_qubits()));
    m.insert(
        "correctable_block".into(),
        json!({
            "k": block.k(),
            "multiplicity": block.block.multiplicity,
            "algebra_dim": block.algebra.len(),
            "projection": mat(&block.block.projection),
        }),
    );
    m.insert("interaction_algebra_dim".into(), json!(rep.interaction_algebra.len()));
    m.insert(
        "correction".into(),
        json!({
            "residual": num(rep.residual()),
            "eigen": num(rep.correction.eigen),
            "commutation": num(rep.correction.commutation),
            "injective": rep.correction.injective,
        }),
    );
    m.insert("commutant_gap".into(), num(rep.commutant_gap));
    m.insert("recovery_defect".into(), num(rep.recovery_defect));
    m.insert("kl_projection_rank".into(), json!(rank(&rep.kl_projection, &s.tol)));
    m.insert("kl_projection".into(), mat(&rep.kl_projection));
    m.insert("zeta_p".into(), mat(&rep.zeta_p));
    m.insert("recovery".into(), Value::Array(rep.recovery.kraus().iter().map(mat).collect()));
    Ok(Value::Object(m))
}

pub fn cmd_structure(spec: &ChannelSpec, s: &Settings) -> Result<Value, CliError> {
    let ch = spec.to_channel(s.max_dim)?;
    let rep = verify_structure(&ch, s.samples, s.seed, &s.tol)?;
    let mut m = header("structure", "Structure of the Perron-Frobenius eigenspace through the exchange algebras", s);
    m.insert("input".into(), json!({ "channel": spec }));
    m.insert("passed".into(), json!(rep.passed()));
    m.insert("r".into(), num(rep.r));
    m.insert("eigenspace_dim".into(), json!(rep.eigenspace_dim));
    m.insert("p_max_rank".into(), json!(rep.p_max_rank));
    m.insert(
        "algebra_dims".into(),
        json!({ "a": rep.a_dim, "b": rep.b_dim, "c": rep.c_dim, "c_zeta": rep.c_zeta_dim }),
    );
    m.insert("hypothesis".into(), json!(rep.hypothesis));
    m.insert("hypothesis_strong".into(), json!(rep.hypothesis_strong));
    m.insert("a_vs_b_star".into(), num(rep.a_vs_b_star));
    m.insert("c_vs_intersection".into(), num(rep.c_vs_intersection));
    let zc = &rep.zeta_central;
    m.insert(
        "zeta_central".into(),
        json!({
            "c_dim": zc.c_dim,
            "commutator": num(zc.commutator),
            "p_max_commutator": num(zc.p_max_commutator),
            "eigen": num(zc.eigen),
        }),
    );
    m.insert(
        "factorizations".into(),
        Value::Array(
            rep.factorizations
                .iter()
                .map(|f| {
                    json!({
                        "k": f.k,
                        "multiplicity": f.multiplicity,
                        "product_dim": f.product_dim,
                        "zeta_algebra_dim": f.zeta_algebra_dim,
                        "same_span": f.same_span,
                        "holds": f.holds(),
                    })
                })
                .collect(),
        ),
    );
    m.insert("c_zeta_form".into(), inclusion(&rep.c_zeta_form));
    m.insert("conjugation_form".into(), inclusion(&rep.conjugation_form));
    m.insert("product_form".into(), inclusion(&rep.product_form));
    m.insert("dims_match".into(), rep.dims_match.map_or(Value::Null, Value::Bool));
    Ok(Value::Object(m))
}

pub fn cmd_classical(spec: &ClassicalSpec, s: &Settings) -> Result<Value, CliError> {
    let a = spec.to_matrix(s.max_dim)?;
    let (r, v) = classical_pf(&a, &s.tol)?;
    let ch = embed_classical(&a)?;
    let mut m = header("classical", "Perron-Frobenius theorem for nonnegative matrices with Collatz-Wielandt bounds", s);
    m.insert("input".into(), json!({ "matrix": spec }));
    m.insert("r".into(), num(r));
    m.insert("eigenvector".into(), vector(&v));
    m.insert("eigenspace_dim".into(), json!(eigenspace(&ch, &s.tol)?.len()));
    m.insert("irreducible".into(), json!(is_irreducible(&ch)));
    let bounds = |z: &[f64]| -> Result<Value, CliError> {
        let (lo, hi) = cw_bounds(&a, z)?;
        Ok(json!({ "lower": num(lo), "upper": num(hi), "brackets_r": lo <= r * (1.0 + 1e-12) && r <= hi * (1.0 + 1e-12) }))
    };
    let at_pf = if v.iter().all(|&x| x > 0.0) { bounds(&v)? } else { Value::Null };
    m.insert("cw_at_eigenvector".into(), at_pf);
    m.insert("cw_at_z".into(), match &spec.z { Some(z) => bounds(z)?, None => Value::Null });
    Ok(Value::Object(m))
}

/// Collatz-Wielandt certificate for `z`, or for the left eigenvector when no
/// test element is given.
pub fn cmd_certify(spec: &ChannelSpec, z: Option<&MatrixSpec>, s: &Settings) -> Result<Value, CliError> {
    let ch = spec.to_channel(s.max_dim)?;
    let (zm, source) = match z {
        Some(z) => {
            let zm = z.to_matrix(s.max_dim)?;
            if zm.rows() != ch.dim() {
                return Err(CliError::Invalid(format!("test element dimension {} does not match channel dimension {}", zm.rows(), ch.dim())));
            }
            (zm, "file")
        }
        None => (pf_left(&ch, &s.tol)?, "left_eigenvector"),
    };
    let cert = cw_certify(&ch, &zm, &s.tol)?;
    let mut m = header("certify", "Collatz-Wielandt characterisation of the spectral radius", s);
    let mut input = serde_json::Map::new();
    input.insert("channel".into(), json!(spec));
    if let Some(z) = z {
        input.insert("z".into(), json!(z));
    }
    m.insert("input".into(), Value::Object(input));
    m.insert("z_source".into(), json!(source));
    m.insert("r".into(), num(cert.r));
    m.insert("clauses".into(), json!(cert.clauses));
    m.insert("verdict".into(), json!(cert.describe()));
    m.insert("conclusions_hold".into(), json!(cert.conclusions_hold));
    m.insert("conclusion_residual".into(), num(cert.conclusion_residual));
    m.insert("r_tilde".into(), cert.r_tilde.map_or(Value::Null, num));
    m.insert("support_in_p_max".into(), json!(cert.support_in_p_max));
    m.insert("z".into(), mat(&zm));
    Ok(Value::Object(m))
}
