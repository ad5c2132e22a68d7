//! Built-in biochemical networks used across tests, benchmarks, and the CLI.

use crate::network::{parse_network, ReactionNetwork};

/// Two enzymes competing for one substrate.
pub const COMPETITIVE_BINDING: &str = "\
# competitive binding: two enzymes compete for the substrate X
R1: X + E1 <-> XE1
R2: X + E2 <-> XE2
";

/// Two molecules binding only in the presence of a facilitator.
pub const THREE_BODY: &str = "\
# three-body binding: X and Y bind through the facilitator E
R1: X + E <-> XE
R2: Y + E <-> YE
R3: YE + X <-> XEY
R4: Y + XE <-> XEY
";

/// Primer annealing step of PCR kinetics.
pub const PCR_ANNEALING: &str = "\
# PCR primer annealing: primers P1, P2 anneal to templates T1, T2
R1: P1 + T1 <-> H1
R2: P2 + T2 <-> H2
R3: T1 + T2 <-> U
R4: P1 + P2 <-> D
";

/// Raf-1 kinase inhibitor protein pathway (reactions 3, 5, 7 irreversible).
pub const RKIP: &str = "\
# RKIP: Raf-1 kinase inhibitor protein module of the EGF pathway
R1: Raf1 + RKIP <-> Raf1_RKIP
R2: Raf1_RKIP + ERKPP <-> Raf1_RKIP_ERKPP
R3: Raf1_RKIP_ERKPP -> Raf1 + ERK + RKIPP
R4: MEKPP + ERK <-> MEKPP_ERK
R5: MEKPP_ERK -> MEKPP + ERKPP
R6: RKIPP + RP <-> RKIPP_RP
R7: RKIPP_RP -> RKIP + RP
";

/// Electron transfer between n reduced/oxidized substrate pairs:
/// B_i + A_j ⇌ A_i + B_j for all i < j.
pub fn electron_transfer(n: usize) -> String {
    assert!(n >= 2);
    let mut out = String::from("# electron transfer: substrates exchange electrons pairwise\n");
    let mut k = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            k += 1;
            out.push_str(&format!("R{k}: B{i} + A{j} <-> A{i} + B{j}\n"));
        }
    }
    out
}

/// Processive phosphorylation/dephosphorylation chain of length n: a kinase
/// walks the substrate up through n sites, a phosphatase walks it back down.
pub fn processive_phosphorylation(n: usize) -> String {
    assert!(n >= 1);
    let mut out =
        String::from("# processive phosphorylation: kinase K adds, phosphatase F removes\n");
    let mut k = 1;
    out.push_str(&format!("R{k}: S0 + K <-> S0K\n"));
    for i in 0..n - 1 {
        k += 1;
        out.push_str(&format!("R{k}: S{i}K -> S{}K\n", i + 1));
    }
    k += 1;
    out.push_str(&format!("R{k}: S{}K -> S{n} + K\n", n - 1));
    k += 1;
    out.push_str(&format!("R{k}: S{n} + F <-> S{n}F\n"));
    for i in (2..=n).rev() {
        k += 1;
        out.push_str(&format!("R{k}: S{i}F -> S{}F\n", i - 1));
    }
    k += 1;
    out.push_str(&format!("R{k}: S1F -> S0 + F\n"));
    out
}

/// All built-in networks by name.
pub fn corpus_sources() -> Vec<(&'static str, String)> {
    vec![
        ("competitive_binding", COMPETITIVE_BINDING.to_string()),
        ("three_body", THREE_BODY.to_string()),
        ("pcr_annealing", PCR_ANNEALING.to_string()),
        ("rkip", RKIP.to_string()),
        ("electron_transfer_n3", electron_transfer(3)),
        ("processive_phosphorylation_n3", processive_phosphorylation(3)),
        ("processive_phosphorylation_n5", processive_phosphorylation(5)),
    ]
}

/// The four pathway networks used in the trajectory-level checks.
pub const PATHWAY_NAMES: [&str; 4] =
    ["rkip", "pcr_annealing", "electron_transfer_n3", "processive_phosphorylation_n3"];

pub fn by_name(name: &str) -> Option<ReactionNetwork> {
    let src = corpus_sources().into_iter().find(|(n, _)| *n == name)?.1;
    Some(parse_network(&src).expect("built-in networks parse"))
}
