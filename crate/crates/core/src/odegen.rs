//! Amplitude ODE systems for triad components.
//!
//! An isolated triad with modes A1, A2, A3 yields
//!
//!   dA1/dt = a1*A2*A3,  dA2/dt = a2*A1*A3,  dA3/dt = a3*A1*A2.
//!
//! When triads share modes, each shared mode keeps one equation whose
//! terms come from every triad containing it. A mode appearing in t
//! triads carries the prefactor 1/t on each of its t terms; t = 2
//! reproduces the familiar ½ of a butterfly, larger t is the stated
//! generalization. Coefficients stay symbolic: a⟨3t+s+1⟩ names the slot-s
//! coefficient of the component's t-th triad and nothing more is claimed
//! about them, though a numeric table can be plugged in downstream via
//! [`OdeSystem::coefficient_ids`].

use serde::Serialize;

use crate::dispersion::{Triad, WaveVector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OdeTerm {
    /// Coefficient placeholder id; unique per (triad, mode slot).
    pub alpha_id: u32,
    /// Indices into [`OdeSystem::modes`] of the two partner amplitudes.
    pub factor_mode_indices: [usize; 2],
    pub prefactor_num: u32,
    pub prefactor_den: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OdeEquation {
    pub mode_index: usize,
    pub terms: Vec<OdeTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdeSystem {
    /// Distinct wave vectors of the component in first-occurrence order.
    pub modes: Vec<WaveVector>,
    /// Amplitude numbers, one per mode: slot s of triad t is named
    /// A(3t+s+1) when first seen, and a shared mode keeps its first
    /// name, so label sequences may have gaps.
    pub labels: Vec<u32>,
    /// One equation per mode, in mode order.
    pub equations: Vec<OdeEquation>,
    /// Pairs of triad positions (within the component) sharing two modes;
    /// such merges are handled by the same rule but worth reporting.
    pub two_vector_pairs: Vec<(usize, usize)>,
}

impl OdeSystem {
    /// All coefficient ids in emission order, for plugging in numeric
    /// tables downstream.
    pub fn coefficient_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self
            .equations
            .iter()
            .flat_map(|eq| eq.terms.iter().map(|t| t.alpha_id))
            .collect();
        ids.sort_unstable();
        ids
    }
}

/// Builds the ODE system of one connected component, given its triads in
/// canonical order. Triads must consist of three distinct vectors.
pub fn generate(triads: &[Triad]) -> OdeSystem {
    let mut modes: Vec<WaveVector> = Vec::new();
    let mut labels: Vec<u32> = Vec::new();
    let mut index_of = std::collections::BTreeMap::<WaveVector, usize>::new();
    let mut slots: Vec<[usize; 3]> = Vec::with_capacity(triads.len());

    for (t_idx, t) in triads.iter().enumerate() {
        let vs = t.vectors();
        assert!(
            vs[0] != vs[1] && vs[0] != vs[2] && vs[1] != vs[2],
            "triad with repeated modes: {t}"
        );
        let mut triad_slots = [0usize; 3];
        for (s, v) in vs.into_iter().enumerate() {
            let idx = *index_of.entry(v).or_insert_with(|| {
                modes.push(v);
                labels.push((3 * t_idx + s + 1) as u32);
                modes.len() - 1
            });
            triad_slots[s] = idx;
        }
        slots.push(triad_slots);
    }

    let mut counts = vec![0u32; modes.len()];
    for triad_slots in &slots {
        for &idx in triad_slots {
            counts[idx] += 1;
        }
    }

    let equations: Vec<OdeEquation> = (0..modes.len())
        .map(|mode_index| {
            let mut terms = Vec::new();
            for (t_idx, triad_slots) in slots.iter().enumerate() {
                for s in 0..3 {
                    if triad_slots[s] == mode_index {
                        let partners: Vec<usize> = (0..3)
                            .filter(|&x| x != s)
                            .map(|x| triad_slots[x])
                            .collect();
                        terms.push(OdeTerm {
                            alpha_id: (3 * t_idx + s + 1) as u32,
                            factor_mode_indices: [partners[0], partners[1]],
                            prefactor_num: 1,
                            prefactor_den: counts[mode_index],
                        });
                    }
                }
            }
            debug_assert_eq!(terms.len() as u32, counts[mode_index]);
            OdeEquation { mode_index, terms }
        })
        .collect();

    let mut two_vector_pairs = Vec::new();
    for i in 0..slots.len() {
        for j in i + 1..slots.len() {
            let shared = slots[i]
                .iter()
                .filter(|idx| slots[j].contains(idx))
                .count();
            if shared >= 2 {
                two_vector_pairs.push((i, j));
            }
        }
    }

    OdeSystem {
        modes,
        labels,
        equations,
        two_vector_pairs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeFormat {
    Text,
    Structured,
}

/// Renders one system. Text output is a human-readable equation list with
/// a legend; structured output is JSON with explicit prefactors, suitable
/// for downstream integrators.
pub fn emit(system: &OdeSystem, format: OdeFormat) -> String {
    match format {
        OdeFormat::Text => emit_text(system),
        OdeFormat::Structured => {
            #[derive(Serialize)]
            struct Doc<'a> {
                modes: Vec<ModeDto>,
                equations: &'a [OdeEquation],
            }
            #[derive(Serialize)]
            struct ModeDto {
                m: u32,
                n: u32,
            }
            let doc = Doc {
                modes: system
                    .modes
                    .iter()
                    .map(|v| ModeDto { m: v.m, n: v.n })
                    .collect(),
                equations: &system.equations,
            };
            let mut text =
                serde_json::to_string_pretty(&doc).expect("ODE serialization is infallible");
            text.push('\n');
            text
        }
    }
}

fn emit_text(system: &OdeSystem) -> String {
    let triad_count = system.equations.iter().map(|e| e.terms.len()).sum::<usize>() / 3;
    let mut out = String::new();
    out.push_str(&format!(
        "# modes: {}, triads: {}\n",
        system.modes.len(),
        triad_count
    ));
    out.push_str(
        "# prefactor convention: a mode appearing in t triads carries 1/t on each of its t terms\n",
    );
    for (i, j) in &system.two_vector_pairs {
        out.push_str(&format!("# note: triads {i} and {j} share two modes\n"));
    }
    for (idx, v) in system.modes.iter().enumerate() {
        out.push_str(&format!("# A{} = ({},{})\n", system.labels[idx], v.m, v.n));
    }
    for eq in &system.equations {
        let label = system.labels[eq.mode_index];
        let rendered: Vec<String> = eq
            .terms
            .iter()
            .map(|t| {
                format!(
                    "a{}*A{}*A{}",
                    t.alpha_id,
                    system.labels[t.factor_mode_indices[0]],
                    system.labels[t.factor_mode_indices[1]]
                )
            })
            .collect();
        let rhs = if eq.terms.len() == 1 {
            rendered.into_iter().next().unwrap()
        } else {
            let t = eq.terms[0].prefactor_den;
            format!("1/{t}*({})", rendered.join(" + "))
        };
        out.push_str(&format!("dA{label}/dt = {rhs}\n"));
    }
    out
}
