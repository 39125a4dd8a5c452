//! Runs a problem through invariance, obstruction, cohomology, extension, stabilization
//! and the induced-representation cross-check, collecting a deterministic report.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::Serializer;
use serde::Serialize;

use crate::cohomology::{analyze_coboundary, class_order, normalize, KernelPairing};
use crate::error::{Error, Result};
use crate::extend::{
    find_extension, mackey_tensor, projective_irreps, induced_crosscheck, stabilize,
    ExtensionMethod, ExtensionOutcome, CrosscheckResiduals, SearchBudget,
};
use crate::groups::quotient_with_transversal;
use crate::interchange::{matrix_to_json, JsonMatrix};
use crate::matrices::ComplexMatrix;
use crate::obstruction::{intertwiners, projective_extension, section_unitaries, twisted_action};
use crate::problem::{Problem, Task};
use crate::reps::{commutant, is_g_invariant, rep_validate, UnitaryRep};

/// Overrides applied on top of a problem file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub tasks: Option<Vec<Task>>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub transversal_seed: Option<u64>,
    pub budget: SearchBudget,
}

/// `true`, `false`, or `"undecided"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Trivial,
    Nontrivial,
    Undecided,
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Verdict::Trivial => s.serialize_bool(true),
            Verdict::Nontrivial => s.serialize_bool(false),
            Verdict::Undecided => s.serialize_str("undecided"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RepTable {
    pub dim: usize,
    pub matrices: Vec<JsonMatrix>,
}

impl RepTable {
    pub fn of(rep: &UnitaryRep) -> Self {
        RepTable {
            dim: rep.dim(),
            matrices: rep.mats().iter().map(matrix_to_json).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SigmaReport {
    Scalar { values: Vec<Vec<[f64; 2]>> },
    Matrix { values: Vec<Vec<JsonMatrix>> },
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub labels: Option<Vec<String>>,
    pub subgroup: Vec<usize>,
    pub quotient_order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Choices {
    pub transversal: Vec<usize>,
    pub w_regenerations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoboundaryAudit {
    pub phases: Vec<Vec<f64>>,
    pub kernel_rank: usize,
    pub obstructions: Vec<KernelPairing>,
    pub witness: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionPart {
    pub outcome: &'static str,
    pub method: ExtensionMethod,
    pub reason: Option<String>,
    pub orbits: Option<Vec<Vec<usize>>>,
    pub rep: Option<RepTable>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MackeyPart {
    pub projective_dim: usize,
    pub dim: usize,
    pub irreducible: bool,
    pub character: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorPart {
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionReport {
    pub name: String,
    pub version: &'static str,
    pub seed: u64,
    pub transversal_seed: Option<u64>,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub tasks: Vec<Task>,
    pub group: GroupSummary,
    pub choices: Option<Choices>,
    pub invariant: Option<bool>,
    pub invariance_witnesses: Vec<usize>,
    pub irreducible: Option<bool>,
    pub commutant_dim: Option<usize>,
    pub sigma: Option<SigmaReport>,
    pub coboundary: Option<CoboundaryAudit>,
    pub trivial: Option<Verdict>,
    pub class_order: Option<usize>,
    pub extension: Option<ExtensionPart>,
    pub mackey: Vec<MackeyPart>,
    pub stabilized: Option<RepTable>,
    pub crosscheck: Option<CrosscheckResiduals>,
    pub residuals: BTreeMap<String, f64>,
    pub error: Option<ErrorPart>,
}

impl ExtensionReport {
    /// 0 completed, 1 input error, 2 residual or numerical failure.
    pub fn exit_code(&self) -> i32 {
        match &self.error {
            None => 0,
            Some(e) if INPUT_CODES.contains(&e.code) => 1,
            Some(_) => 2,
        }
    }

    pub fn extendable(&self) -> Option<bool> {
        match self.extension.as_ref()?.outcome {
            "found" => Some(true),
            "not_extendable" => Some(false),
            _ => None,
        }
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let trivial = match self.trivial {
            Some(Verdict::Trivial) => "trivial",
            Some(Verdict::Nontrivial) => "nontrivial",
            Some(Verdict::Undecided) => "undecided",
            None => "-",
        };
        let ext = self.extension.as_ref().map_or("-", |e| e.outcome);
        let worst = self.residuals.values().copied().fold(0.0, f64::max);
        let mut line = format!(
            "{}: |G|={} |N|={} invariant={} obstruction={} class_order={} extension={} stabilized={} max_residual={:.2e}",
            self.name,
            self.group.order,
            self.group.subgroup.len(),
            self.invariant.map_or("-".to_string(), |b| b.to_string()),
            trivial,
            self.class_order.map_or("-".to_string(), |k| k.to_string()),
            ext,
            self.stabilized.as_ref().map_or("-".to_string(), |s| format!("{}-dim", s.dim)),
            worst,
        );
        if let Some(e) = &self.error {
            line.push_str(&format!(" error={}: {}", e.code, e.message));
        }
        line
    }
}

const INPUT_CODES: [&str; 5] = ["input", "invalid_group", "not_normal", "shape", "size_cap"];

fn scalar_json(m: &ComplexMatrix) -> [f64; 2] {
    crate::interchange::complex_to_json(m[(0, 0)])
}

/// Report for a problem that failed to parse.
pub fn input_error_report(source: &str, err: &Error) -> ExtensionReport {
    ExtensionReport {
        name: source.to_string(),
        version: env!("CARGO_PKG_VERSION"),
        seed: 0,
        transversal_seed: None,
        tolerances: BTreeMap::new(),
        tasks: Vec::new(),
        group: GroupSummary {
            order: 0,
            labels: None,
            subgroup: Vec::new(),
            quotient_order: 0,
        },
        choices: None,
        invariant: None,
        invariance_witnesses: Vec::new(),
        irreducible: None,
        commutant_dim: None,
        sigma: None,
        coboundary: None,
        trivial: None,
        class_order: None,
        extension: None,
        mackey: Vec::new(),
        stabilized: None,
        crosscheck: None,
        residuals: BTreeMap::new(),
        error: Some(ErrorPart {
            code: err.code(),
            message: err.to_string(),
        }),
    }
}

pub fn run(problem: &Problem, opts: &RunOptions) -> ExtensionReport {
    let tol = opts.tol.unwrap_or(problem.tol);
    let seed = opts.seed.unwrap_or(problem.seed);
    let transversal_seed = opts.transversal_seed.or(problem.transversal_seed);
    let tasks: Vec<Task> = match &opts.tasks {
        Some(t) => {
            let mut t = t.clone();
            t.sort();
            t.dedup();
            t
        }
        None => problem.tasks.iter().copied().collect(),
    };
    let g = &problem.group;
    let mut report = ExtensionReport {
        name: problem.name.clone(),
        version: env!("CARGO_PKG_VERSION"),
        seed,
        transversal_seed,
        tolerances: BTreeMap::from([("tol", tol), ("failure", 10.0 * tol)]),
        tasks: tasks.clone(),
        group: GroupSummary {
            order: g.order(),
            labels: g.labels().map(<[String]>::to_vec),
            subgroup: problem.subgroup.members().to_vec(),
            quotient_order: g.order() / problem.subgroup.order(),
        },
        choices: None,
        invariant: None,
        invariance_witnesses: Vec::new(),
        irreducible: None,
        commutant_dim: None,
        sigma: None,
        coboundary: None,
        trivial: None,
        class_order: None,
        extension: None,
        mackey: Vec::new(),
        stabilized: None,
        crosscheck: None,
        residuals: BTreeMap::new(),
        error: None,
    };
    if let Err(e) = run_stages(problem, opts, tol, seed, transversal_seed, &tasks, &mut report) {
        report.error = Some(ErrorPart {
            code: e.code(),
            message: e.to_string(),
        });
    }
    report
}

fn run_stages(
    problem: &Problem,
    opts: &RunOptions,
    tol: f64,
    seed: u64,
    transversal_seed: Option<u64>,
    tasks: &[Task],
    report: &mut ExtensionReport,
) -> Result<()> {
    let g = &problem.group;
    let pi = problem.pi.clone().with_tol(tol);
    let res = &mut report.residuals;
    let check = rep_validate(&pi);
    res.insert("input.homomorphism".into(), check.homomorphism);
    res.insert("input.unitarity".into(), check.unitarity);

    let mut qd = quotient_with_transversal(g, &problem.subgroup)?;
    if let Some(ts) = transversal_seed {
        qd = qd.randomized(&mut ChaCha8Rng::seed_from_u64(ts));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let inv = is_g_invariant(&pi, &qd)?;
    report.invariant = Some(inv.invariant);
    report.invariance_witnesses = inv.witnesses.clone();
    let comm = commutant(&pi);
    report.commutant_dim = Some(comm.dim);
    report.irreducible = Some(comm.dim == 1);
    if !inv.invariant {
        report.choices = Some(Choices {
            transversal: qd.transversal().to_vec(),
            w_regenerations: 0,
        });
        if tasks.contains(&Task::Extend) {
            report.extension = Some(ExtensionPart {
                outcome: "not_extendable",
                method: ExtensionMethod::ScalarCocycle,
                reason: Some(format!(
                    "pi is not G-invariant: conjugation by element {} changes its character",
                    inv.witnesses[0]
                )),
                orbits: None,
                rep: None,
            });
        }
        return Ok(());
    }

    let (w, regenerations) = intertwiners(&pi, &qd, &mut rng)?;
    report.choices = Some(Choices {
        transversal: qd.transversal().to_vec(),
        w_regenerations: regenerations,
    });
    let section = section_unitaries(&pi, &qd, &w)?;
    res.insert("section.v_sn".into(), section.residual());
    let action = twisted_action(&pi, &qd, &section, &mut rng)?;
    let ar = action.residuals();
    for (k, v) in [
        ("action.descent", ar.descent),
        ("action.membership", ar.membership),
        ("action.normalization", ar.normalization),
        ("action.composition", ar.composition),
        ("action.cocycle", ar.cocycle),
        ("action.alpha_identity", ar.alpha_identity),
    ] {
        res.insert(k.into(), v);
    }
    let nq = qd.order();
    let sigma_rows = |f: &dyn Fn(&ComplexMatrix) -> JsonMatrix| -> Vec<Vec<JsonMatrix>> {
        (0..nq).map(|x| (0..nq).map(|y| f(action.sigma(x, y))).collect()).collect()
    };

    let mut scalar_sigma = None;
    if action.is_scalar() {
        let sigma = normalize(&action, tol)?;
        res.insert("cohomology.cocycle".into(), sigma.cocycle_residual());
        report.sigma = Some(SigmaReport::Scalar {
            values: (0..nq)
                .map(|x| (0..nq).map(|y| scalar_json(action.sigma(x, y))).collect())
                .collect(),
        });
        let analysis = analyze_coboundary(&sigma)?;
        if let Some(wit) = &analysis.witness {
            res.insert("cohomology.witness".into(), wit.residual);
        }
        report.trivial = Some(if analysis.witness.is_some() {
            Verdict::Trivial
        } else {
            Verdict::Nontrivial
        });
        report.class_order = Some(class_order(&sigma)?);
        report.coboundary = Some(CoboundaryAudit {
            phases: analysis.phases.clone(),
            kernel_rank: analysis.kernel_rank,
            obstructions: analysis.obstructions.clone(),
            witness: analysis
                .witness
                .as_ref()
                .map(|w| w.nu.iter().map(|z| crate::interchange::complex_to_json(*z)).collect()),
        });
        scalar_sigma = Some(sigma);
    } else {
        report.sigma = Some(SigmaReport::Matrix {
            values: sigma_rows(&matrix_to_json),
        });
    }

    if tasks.contains(&Task::Extend) {
        let found = find_extension(&action, &opts.budget, &mut rng)?;
        if let Some(r) = found.exterior_residual {
            res.insert("extension.exterior".into(), r);
        }
        if let Some(rho) = found.outcome.extension() {
            let check = rep_validate(rho);
            res.insert("extension.homomorphism".into(), check.homomorphism);
            res.insert(
                "extension.restriction".into(),
                crate::extend::restriction_residual(rho, &pi),
            );
        }
        if scalar_sigma.is_none() {
            report.trivial = Some(match found.outcome.decided() {
                Some(true) => Verdict::Trivial,
                Some(false) => Verdict::Nontrivial,
                None => Verdict::Undecided,
            });
        }
        let reason = match &found.outcome {
            ExtensionOutcome::Found(_) => None,
            ExtensionOutcome::NotExtendable { reason } | ExtensionOutcome::Undecided { reason } => {
                Some(reason.clone())
            }
        };
        report.extension = Some(ExtensionPart {
            outcome: found.outcome.tag(),
            method: found.method,
            reason,
            orbits: found.orbits.clone(),
            rep: found.outcome.extension().map(RepTable::of),
        });

        if let Some(sigma) = &scalar_sigma {
            let u = projective_extension(&action)?;
            let mut worst: f64 = 0.0;
            for w in projective_irreps(&sigma.conj(), &mut rng)? {
                let m = mackey_tensor(&u, &pi, &qd, &w)?;
                worst = worst.max(m.restriction);
                report.mackey.push(MackeyPart {
                    projective_dim: w.dim,
                    dim: m.rep.dim(),
                    irreducible: m.irreducible,
                    character: (0..g.order())
                        .map(|s| crate::interchange::complex_to_json(m.rep.character(s)))
                        .collect(),
                });
            }
            res.insert("mackey.restriction".into(), worst);
        }
    } else if scalar_sigma.is_none() {
        report.trivial = Some(Verdict::Undecided);
    }

    if tasks.contains(&Task::Stabilize) {
        let st = stabilize(&action)?;
        res.insert("stabilized.homomorphism".into(), st.residuals.homomorphism);
        res.insert("stabilized.restriction".into(), st.residuals.restriction);
        res.insert("stabilized.exterior".into(), st.residuals.exterior);
        report.stabilized = Some(RepTable::of(&st.rep));
    }

    if tasks.contains(&Task::Crosscheck) {
        let rc = induced_crosscheck(&action)?;
        res.insert("crosscheck.omega".into(), rc.omega);
        res.insert("crosscheck.beta".into(), rc.beta);
        res.insert("crosscheck.covariance".into(), rc.covariance);
        res.insert("crosscheck.right_covariance".into(), rc.right_covariance);
        res.insert("crosscheck.commutation".into(), rc.commutation);
        report.crosscheck = Some(rc);
    }
    Ok(())
}
