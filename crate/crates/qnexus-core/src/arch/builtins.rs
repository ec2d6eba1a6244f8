//! Built-in architectures for the 1000-qubit AQFT study and the RSA-2048 study.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::*;

pub const BUILTIN_NAMES: [&str; 11] = ["baseline1000", "A1", "A2", "A3", "Mono", "B1", "B2", "B3", "B4", "B5", "B6"];

const DAY_S: f64 = 86_400.0;

fn superconducting() -> ModalitySpec {
    ModalitySpec {
        name: "superconducting".into(),
        p_phys: 5e-4,
        p_th: 6e-3,
        t_cycle_min_s: 1e-6,
        t_cycle_max_s: 1e-6,
        t1_s: 1e-4,
        t2_s: 1e-4,
    }
}

fn photonic() -> ModalitySpec {
    ModalitySpec { name: "photonic".into(), ..superconducting() }
}

fn rare_earth_ion() -> ModalitySpec {
    ModalitySpec {
        name: "rare_earth_ion".into(),
        p_phys: 1e-6,
        p_th: 6e-3,
        t_cycle_min_s: 0.0,
        t_cycle_max_s: 0.0,
        t1_s: 23.0 * DAY_S,
        t2_s: 36_000.0,
    }
}

fn neutral_atom(t_cycle_min_s: f64, t_cycle_max_s: f64) -> ModalitySpec {
    ModalitySpec {
        name: "neutral_atom".into(),
        p_phys: 1e-4,
        p_th: 6e-3,
        t_cycle_min_s,
        t_cycle_max_s,
        t1_s: 20.0,
        t2_s: 10.0,
    }
}

fn qpu(n_logical: u32, cores: u32, distance: u32, ls_edges: Option<u32>) -> ModuleSpec {
    ModuleSpec {
        id: "qpu".into(),
        kind: ModuleKind::Qpu,
        n_logical,
        code: CodeSpec::surface(distance),
        modality: superconducting(),
        qpu: Some(QpuParams { cores, eps_2q: 1e-9, ls_edges }),
        qsf: None,
        asqpu: None,
        raqm: None,
        qb: None,
    }
}

fn bare(id: &str, kind: ModuleKind, n_logical: u32, code: CodeSpec, modality: ModalitySpec) -> ModuleSpec {
    ModuleSpec {
        id: id.into(),
        kind,
        n_logical,
        code,
        modality,
        qpu: None,
        qsf: None,
        asqpu: None,
        raqm: None,
        qb: None,
    }
}

fn t_factory(distance: u32) -> ModuleSpec {
    ModuleSpec {
        qsf: Some(QsfParams {
            state: MagicState::T,
            n_dist: 72,
            n_mf_per_qpu: 3.0,
            injection_cycles: 6 * distance,
            eps_state: 2.1e-9,
            ccz_rows_per_qpu: None,
        }),
        ..bare("qsf", ModuleKind::Qsf, 0, CodeSpec::surface(distance), photonic())
    }
}

fn ccz_factory(distance: u32) -> ModuleSpec {
    ModuleSpec {
        qsf: Some(QsfParams {
            state: MagicState::Ccz,
            n_dist: 12,
            n_mf_per_qpu: 0.67,
            injection_cycles: 4 * distance,
            eps_state: 1e-10,
            ccz_rows_per_qpu: Some(2.0),
        }),
        ..bare("qsf", ModuleKind::Qsf, 0, CodeSpec::surface(distance), photonic())
    }
}

fn bus() -> ModuleSpec {
    ModuleSpec {
        qb: Some(QbParams { n_buf: 2, n_anc_pump: 1, bell_rate_hz: 1e8, bell_error: 1e-3, eps_tele: 1e-4 }),
        ..bare("qb", ModuleKind::Qb, 0, CodeSpec::passive(1), photonic())
    }
}

fn link(a: &str, b: &str, protocol: LinkProtocol) -> LinkSpec {
    LinkSpec { a: a.into(), b: b.into(), protocol }
}

fn stqm(id: &str, n_logical: u32, distance: u32) -> ModuleSpec {
    bare(id, ModuleKind::Stqm, n_logical, CodeSpec::passive(distance), rare_earth_ion())
}

fn surface_raqm(n_logical: u32, distance: u32, t_min: f64, t_max: f64) -> ModuleSpec {
    ModuleSpec {
        raqm: Some(RaqmParams::default()),
        ..bare("raqm", ModuleKind::Raqm, n_logical, CodeSpec::surface(distance), neutral_atom(t_min, t_max))
    }
}

fn aqft_stqm() -> ArchitectureSpec {
    ArchitectureSpec {
        name: "A1".into(),
        modules: vec![qpu(3, 1, 15, Some(3)), t_factory(15), stqm("stqm", 1000, 15), bus()],
        links: vec![link("qpu", "stqm", LinkProtocol::Transversal)],
    }
}

fn aqft_raqm(name: &str, t_min: f64, t_max: f64) -> ArchitectureSpec {
    ArchitectureSpec {
        name: name.into(),
        modules: vec![qpu(3, 1, 15, Some(3)), t_factory(15), surface_raqm(1000, 9, t_min, t_max), bus()],
        links: vec![link("qpu", "raqm", LinkProtocol::LatticeSurgery)],
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum RsaMemory {
    CacheOnly,
    Surface,
    Gross,
}

fn rsa(name: &str, memory: RsaMemory, adder: bool) -> ArchitectureSpec {
    let d = 19;
    let n_cache = if memory == RsaMemory::CacheOnly { 1399 } else { 145 };
    let mut modules = vec![qpu(6, 2, d, None), ccz_factory(d), stqm("cache", n_cache, d), bus()];
    let mut links = vec![link("qpu", "cache", LinkProtocol::Transversal)];
    match memory {
        RsaMemory::CacheOnly => {}
        RsaMemory::Surface => {
            let mut m = surface_raqm(1254, 9, 1e-3, 1e-3);
            m.raqm = Some(RaqmParams {
                k_swap: Some(4),
                transfer_code: Some(CodeSpec::surface(d)),
                n_transfer: Some(22),
                ..RaqmParams::default()
            });
            modules.push(m);
            links.push(link("qpu", "raqm", LinkProtocol::Transversal));
        }
        RsaMemory::Gross => {
            let mut m = surface_raqm(1260, 12, 1e-3, 1e-3);
            m.code = CodeSpec::gross();
            m.raqm = Some(RaqmParams {
                transfer_code: Some(CodeSpec::surface(d)),
                n_transfer: Some(26),
                ..RaqmParams::default()
            });
            modules.push(m);
            links.push(link("qpu", "raqm", LinkProtocol::LatticeSurgery));
        }
    }
    if adder {
        modules.push(ModuleSpec {
            asqpu: Some(AsqpuParams { specialty: "adder".into(), cnot_cycles: 1, ccz_factories: 12 }),
            ..bare("asqpu", ModuleKind::Asqpu, 37, CodeSpec::surface(d), superconducting())
        });
        links.push(link("asqpu", "cache", LinkProtocol::Transversal));
        match memory {
            RsaMemory::CacheOnly => {}
            RsaMemory::Surface => links.push(link("asqpu", "raqm", LinkProtocol::Transversal)),
            RsaMemory::Gross => links.push(link("asqpu", "raqm", LinkProtocol::LatticeSurgery)),
        }
    }
    ArchitectureSpec { name: name.into(), modules, links }
}

/// Returns one of the named reference architectures.
pub fn builtin_architecture(name: &str) -> Result<ArchitectureSpec, ArchError> {
    let spec = match name {
        "baseline1000" => ArchitectureSpec {
            name: "baseline1000".into(),
            modules: vec![qpu(1000, 1, 15, None), t_factory(15)],
            links: Vec::new(),
        },
        "A1" => aqft_stqm(),
        "A2" => aqft_raqm("A2", 50e-6, 1e-3),
        "A3" => aqft_raqm("A3", 1e-3, 1e-3),
        "Mono" => ArchitectureSpec {
            name: "Mono".into(),
            modules: vec![qpu(1399, 1, 25, None), ccz_factory(25)],
            links: Vec::new(),
        },
        "B1" => rsa("B1", RsaMemory::CacheOnly, false),
        "B2" => rsa("B2", RsaMemory::Surface, false),
        "B3" => rsa("B3", RsaMemory::Gross, false),
        "B4" => rsa("B4", RsaMemory::CacheOnly, true),
        "B5" => rsa("B5", RsaMemory::Surface, true),
        "B6" => rsa("B6", RsaMemory::Gross, true),
        other => return Err(ArchError::UnknownBuiltin(other.to_string())),
    };
    Ok(spec)
}

/// All builtins in table order.
pub fn all_builtins() -> Vec<(String, ArchitectureSpec)> {
    BUILTIN_NAMES.iter().map(|n| (n.to_string(), builtin_architecture(n).expect("builtin"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_validates() {
        for (name, spec) in all_builtins() {
            let d = validate(&spec);
            assert!(d.is_empty(), "{name}: {d:?}");
            assert_eq!(spec.name, name);
        }
        assert!(builtin_architecture("Z9").is_err());
    }

    #[test]
    fn golden_aqft_parameters() {
        let a1 = builtin_architecture("A1").unwrap();
        let q = a1.qpu().unwrap();
        assert_eq!((q.n_logical, q.code.distance, q.code.c_anc), (3, 15, 1.0));
        assert_eq!(q.qpu.as_ref().unwrap().ls_edges, Some(3));
        assert_eq!(q.modality.t_cycle_min_s, 1e-6);
        let s = a1.module("stqm").unwrap();
        assert_eq!((s.n_logical, s.code.distance, s.code.family), (1000, 15, CodeFamily::None));
        let f = a1.module("qsf").unwrap().qsf.clone().unwrap();
        assert_eq!((f.n_dist, f.n_mf_per_qpu, f.eps_state), (72, 3.0, 2.1e-9));
        let qb = a1.qb_params().unwrap();
        assert_eq!((qb.n_buf, qb.n_anc_pump, qb.bell_rate_hz, qb.bell_error), (2, 1, 1e8, 1e-3));

        let a2 = builtin_architecture("A2").unwrap();
        let r = a2.module("raqm").unwrap();
        assert_eq!((r.code.distance, r.modality.p_phys, r.modality.t_cycle_min_s), (9, 1e-4, 50e-6));
        let a3 = builtin_architecture("A3").unwrap();
        assert_eq!(a3.module("raqm").unwrap().modality.t_cycle_min_s, 1e-3);
        assert_eq!(a3.link("raqm", "qpu").unwrap().protocol, LinkProtocol::LatticeSurgery);
    }

    #[test]
    fn golden_rsa_parameters() {
        let b2 = builtin_architecture("B2").unwrap();
        let r = b2.module("raqm").unwrap();
        let rp = r.raqm.as_ref().unwrap();
        assert_eq!((r.n_logical, rp.n_transfer, r.code.distance), (1254, Some(22), 9));
        assert_eq!(b2.module("cache").unwrap().n_logical, 145);
        let b3 = builtin_architecture("B3").unwrap();
        let r = b3.module("raqm").unwrap();
        assert_eq!((r.n_logical, r.raqm.as_ref().unwrap().n_transfer), (1260, Some(26)));
        assert_eq!(r.code.family, CodeFamily::GrossBb);
        assert_eq!(b3.qpu().unwrap().code.distance, 19);
        assert_eq!(b3.qpu().unwrap().cores(), 2);
        assert_eq!(b3.qpu().unwrap().core_capacity(), 3);
        let b1 = builtin_architecture("B1").unwrap();
        assert_eq!(b1.module("cache").unwrap().n_logical, 1399);
        assert!(b1.module("raqm").is_none());
        let b6 = builtin_architecture("B6").unwrap();
        assert_eq!(b6.module("asqpu").unwrap().n_logical, 37);
        let mono = builtin_architecture("Mono").unwrap();
        assert_eq!(mono.qpu().unwrap().code.distance, 25);
        let f = mono.module("qsf").unwrap().qsf.clone().unwrap();
        assert_eq!((f.state, f.n_dist), (MagicState::Ccz, 12));
    }

    #[test]
    fn stqm_bias_matches_coherence_ratio() {
        let a1 = builtin_architecture("A1").unwrap();
        let bias = a1.module("stqm").unwrap().modality.bias();
        assert!((bias - 55.2).abs() < 0.1, "{bias}");
    }
}
