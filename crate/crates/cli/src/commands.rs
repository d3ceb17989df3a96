//! Parameter sweeps and state inspection.

use ssr_core::analysis::ppt_check;
use ssr_core::channels::is_ssr_compatible;
use ssr_core::fock::{DensityOperator, PartyPartition, StateDocument, StateKind};
use ssr_core::protocols::{
    coherent_summary, dual_rail_teleport, entangled_summary, multiparty_security_check, random_qubit,
};
use ssr_core::states::{dealer_split, hiding_state, multiparty_hiding_state, resource_state, rho1, rho2, HidingBit};
use ssr_core::{Error, Result, Tolerances};

use crate::report::sig12;
use crate::table::{format_number, Cell, Format, Table};

/// Largest resource size accepted by the entangled sweep.
pub const MAX_RESOURCE: usize = 12;
/// Largest alpha accepted with the automatic cutoff.
pub const MAX_AUTO_ALPHA: f64 = 6.0;

/// Parameter problem reported as a usage error.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn hiding_entangled(n_min: usize, n_max: usize) -> std::result::Result<Table, UsageError> {
    if !(1 <= n_min && n_min <= n_max && n_max <= MAX_RESOURCE) {
        return Err(UsageError(format!(
            "need 1 <= n-min <= n-max <= {MAX_RESOURCE}, got n-min={n_min}, n-max={n_max}"
        )));
    }
    let mut t = Table::new(&["N", "success_bit0", "success_bit1", "worst_case", "average", "N/(N+1)"]);
    for n in n_min..=n_max {
        let s = entangled_summary(n).map_err(|e| UsageError(e.to_string()))?;
        t.push(vec![
            n.into(),
            s.success_bit0.into(),
            s.success_bit1.into(),
            s.worst_case.into(),
            s.average.into(),
            s.predicted.into(),
        ]);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for Cutoff {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Cutoff::Auto);
        }
        s.parse()
            .map(Cutoff::Fixed)
            .map_err(|_| format!("expected 'auto' or a non-negative integer, got '{s}'"))
    }
}

pub fn hiding_coherent(alphas: &[f64], cutoff: Cutoff) -> std::result::Result<Table, UsageError> {
    let mut t = Table::new(&["alpha", "cutoff", "success", "sum_f", "abs_diff", "inconclusive", "truncation_deficit"]);
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(UsageError(format!("alpha must be positive, got {alpha}")));
        }
        let fixed = match cutoff {
            Cutoff::Auto if alpha > MAX_AUTO_ALPHA => {
                return Err(UsageError(format!(
                    "alpha={alpha} exceeds {MAX_AUTO_ALPHA} under the automatic cutoff; pass --cutoff N explicitly"
                )))
            }
            Cutoff::Auto => None,
            Cutoff::Fixed(c) => Some(c),
        };
        let s = coherent_summary(alpha, fixed).map_err(|e| UsageError(e.to_string()))?;
        t.push(vec![
            alpha.into(),
            s.cutoff.into(),
            s.success_bit0.into(),
            s.sum_f.into(),
            (s.success_bit0 - s.sum_f).abs().into(),
            s.inconclusive.into(),
            s.truncation_deficit.into(),
        ]);
    }
    Ok(t)
}

pub fn multiparty(parties: &[usize]) -> std::result::Result<Table, UsageError> {
    let mut t = Table::new(&["parties", "coalition", "max_abs_diff"]);
    for &p in parties {
        let r = multiparty_security_check(p).map_err(|e| UsageError(e.to_string()))?;
        for c in r.checks {
            t.push(vec![p.into(), c.coalition.join("+").into(), c.max_abs_diff.into()]);
        }
    }
    Ok(t)
}

pub fn teleport_demo(qubits: usize, seed: u64) -> Result<Table> {
    let mut t = Table::new(&["qubit", "u_re", "u_im", "v_re", "v_im", "fidelity", "average_fidelity", "max_number_commutator"]);
    for k in 0..qubits {
        let (u, v) = random_qubit(seed.wrapping_add(k as u64));
        let r = dual_rail_teleport(u, v)?;
        t.push(vec![
            k.into(),
            u.re.into(),
            u.im.into(),
            v.re.into(),
            v.im.into(),
            r.fidelity.into(),
            r.average_fidelity.into(),
            r.max_number_commutator.into(),
        ]);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StateName {
    Rho1,
    Rho2,
    Hiding,
    Resource,
    Multiparty,
}

#[derive(Debug, Clone, Copy)]
pub struct StateParams {
    pub alpha: f64,
    pub cutoff: Option<usize>,
    pub n: usize,
    pub bit: u8,
    pub parties: usize,
}

pub struct StateReport {
    pub document: StateDocument,
    pub diagnostics: Table,
}

fn bit_of(v: u8) -> std::result::Result<HidingBit, UsageError> {
    HidingBit::try_from(v).map_err(|e| UsageError(e.to_string()))
}

pub fn state_show(name: StateName, p: StateParams, tol: &Tolerances) -> std::result::Result<StateReport, UsageError> {
    let usage = |e: Error| UsageError(e.to_string());
    let (document, rho) = match name {
        StateName::Rho1 => {
            let r = rho1();
            (StateDocument::from_density(&r), r)
        }
        StateName::Rho2 => {
            let r = rho2(p.alpha, p.cutoff).map_err(usage)?;
            (StateDocument::from_density(&r), r)
        }
        StateName::Hiding => {
            let psi = hiding_state(bit_of(p.bit)?);
            let split = dealer_split(psi.space());
            let space = psi.space().relabeled(|r| split.party_of(&r.id).expect("assigned").to_string());
            let psi = ssr_core::fock::StateVector::new(space, psi.into_amplitudes()).map_err(usage)?;
            (StateDocument::from_vector(&psi), psi.to_density())
        }
        StateName::Resource => {
            let psi = resource_state(p.n);
            (StateDocument::from_vector(&psi), psi.to_density())
        }
        StateName::Multiparty => {
            let psi = multiparty_hiding_state(bit_of(p.bit)?, p.parties).map_err(usage)?;
            (StateDocument::from_vector(&psi), psi.to_density())
        }
    };
    let diagnostics = diagnose(&rho, tol).map_err(usage)?;
    let document = StateDocument {
        data: document.data.iter().map(|[re, im]| [sig12(*re), sig12(*im)]).collect(),
        ..document
    };
    Ok(StateReport { document, diagnostics })
}

fn diagnose(rho: &DensityOperator, tol: &Tolerances) -> Result<Table> {
    let part = PartyPartition::from_space(rho.space());
    let parties = part.parties();
    let (ssr, residual) = is_ssr_compatible(rho, &part, tol)?;
    let ppt = if parties.len() == 2 {
        Some(ppt_check(rho, &part, &parties[0], tol)?)
    } else {
        None
    };
    let mut t = Table::new(&["quantity", "value"]);
    let mut row = |k: &'static str, v: Cell| t.push(vec![k.into(), v]);
    row("dimension", rho.dimension().into());
    row("parties", parties.join("+").into());
    row("trace", rho.matrix().trace().re.into());
    row("min_eigenvalue", rho.min_eigenvalue().into());
    row("truncation_deficit", rho.truncation_deficit().into());
    row("dephase_fixed", ssr.into());
    row("fixed_point_residual", residual.into());
    row("ppt", ppt.map(|r| r.ppt).into());
    row("ppt_min_eigenvalue", ppt.map(|r| r.min_eigenvalue).into());
    row("ppt_conclusive", ppt.map(|r| r.conclusive).into());
    Ok(t)
}

impl StateReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let diag: serde_json::Map<String, serde_json::Value> = self
                    .diagnostics
                    .to_json_value()
                    .as_array()
                    .expect("table is an array")
                    .iter()
                    .map(|r| (r["quantity"].as_str().expect("text key").to_string(), r["value"].clone()))
                    .collect();
                let value = serde_json::json!({ "state": self.document, "diagnostics": diag });
                serde_json::to_string_pretty(&value).expect("serializable") + "\n"
            }
            Format::Csv => {
                let mut out = String::new();
                for row in &self.diagnostics.rows {
                    if let [Cell::Text(k), v] = &row[..] {
                        out.push_str(&format!("# {k}: {}\n", v.to_text()));
                    }
                }
                out.push_str("index,re,im\n");
                for (i, [re, im]) in self.document.data.iter().enumerate() {
                    out.push_str(&format!("{i},{},{}\n", format_number(*re), format_number(*im)));
                }
                out
            }
            Format::Text => {
                let regs: Vec<String> =
                    self.document.registers.iter().map(|r| format!("{}[{}]<={}", r.id, r.party, r.cutoff)).collect();
                let d = self.document.registers.iter().map(|r| r.cutoff + 1).product::<usize>();
                let shape = match self.document.kind {
                    StateKind::Vector => format!("vector of dimension {d}"),
                    StateKind::Density => format!("density matrix {d}x{d}"),
                };
                format!("registers: {}\nkind: {shape}\n", regs.join(" ")) + &self.diagnostics.render(Format::Text)
            }
        }
    }
}
