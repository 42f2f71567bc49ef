//! Scenario files: flat INI sections with `key = value` lines in SI units.
//!
//! Frequencies given as `*_ratio` are in units of the electric plasma
//! frequency ωₑ (band, operating point) or of Γ₃₁ (Rabi amplitudes,
//! detunings). Keys that may be derived from the dispersion solution accept
//! the value `auto`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ini::Ini;
use polariton::materials::DrudeParams;
use polariton::{constants, Material, Polarization};

use crate::error::CliError;

const SECTIONS: &[(&str, &[&str])] = &[
    (
        "materials",
        &[
            "medium1",
            "epsilon1",
            "mu1",
            "medium2",
            "omega_e",
            "gamma_e",
            "omega_m_ratio",
            "gamma_m",
            "reference",
            "polarization",
        ],
    ),
    (
        "band",
        &[
            "omega_min_ratio",
            "omega_max_ratio",
            "points",
            "kappa0",
            "gamma_m_ratio_min",
            "gamma_m_ratio_max",
            "gamma_m_points",
            "abyss_coarse_points",
        ],
    ),
    (
        "eit",
        &[
            "omega31_ratio",
            "density",
            "gamma21",
            "gamma31",
            "rabi_ratios",
            "thickness",
            "k1_probe",
            "k1_control",
            "width",
            "dipole",
            "dipole_orientation",
            "alpha0",
            "detuning_max_ratio",
            "detuning_points",
            "length",
        ],
    ),
    ("pulse", &["delta_t", "distances", "kappa31", "v0", "n_nu", "nu_span_factor", "control_row"]),
    ("output", &["directory", "plot"]),
];

/// A value that is either given or derived from the operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Auto {
    Auto,
    Value(f64),
}

impl Auto {
    pub fn or(self, derived: impl FnOnce() -> f64) -> f64 {
        match self {
            Auto::Auto => derived(),
            Auto::Value(v) => v,
        }
    }

    pub fn is_auto(self) -> bool {
        self == Auto::Auto
    }
}

#[derive(Debug, Clone)]
pub struct MaterialsConfig {
    pub medium1: Material,
    pub medium2: Material,
    /// Medium 2 is the magnetic (negative-index) Drude model.
    pub magnetic: bool,
    pub omega_e: f64,
    pub gamma_e: f64,
    pub omega_m_ratio: f64,
    pub gamma_m: f64,
    pub reference: Option<Material>,
    pub polarization: Polarization,
}

impl MaterialsConfig {
    /// Medium 2 with a different magnetic loss rate (loss maps).
    pub fn medium2_with_gamma_m(&self, gamma_m: f64) -> Result<Material, polariton::Error> {
        let e = DrudeParams::new(self.omega_e, self.gamma_e)?;
        let m = DrudeParams::new(self.omega_m_ratio * self.omega_e, gamma_m)?;
        Material::nimm(e, m, self.medium2.label.clone())
    }
}

#[derive(Debug, Clone)]
pub struct BandConfig {
    pub omega_min_ratio: f64,
    pub omega_max_ratio: f64,
    pub points: usize,
    pub kappa0: f64,
    pub gamma_m_ratio_min: f64,
    pub gamma_m_ratio_max: f64,
    pub gamma_m_points: usize,
    pub abyss_coarse_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    X,
    Z,
}

#[derive(Debug, Clone)]
pub struct EitConfig {
    pub omega31_ratio: Auto,
    pub density: f64,
    pub gamma21: f64,
    pub gamma31: f64,
    pub rabi_ratios: Vec<f64>,
    pub thickness: Auto,
    pub k1_probe: Auto,
    pub k1_control: Auto,
    pub width: f64,
    pub dipole: f64,
    pub orientation: Orientation,
    pub alpha0: Auto,
    pub detuning_max_ratio: f64,
    pub detuning_points: usize,
    pub length: f64,
}

#[derive(Debug, Clone)]
pub struct PulseConfig {
    pub delta_t: f64,
    pub distances: Vec<f64>,
    pub kappa31: Auto,
    pub v0: Auto,
    pub n_nu: usize,
    pub nu_span_factor: f64,
    pub control_row: bool,
}

#[derive(Debug, Clone)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub plot: bool,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub materials: MaterialsConfig,
    pub band: BandConfig,
    pub eit: EitConfig,
    pub pulse: PulseConfig,
    pub output: OutputConfig,
    /// Raw file bytes, hashed into every output footer.
    pub source: Vec<u8>,
}

struct Reader {
    values: BTreeMap<(String, String), String>,
}

impl Reader {
    fn raw(&self, section: &str, key: &str) -> Option<&str> {
        self.values.get(&(section.to_string(), key.to_string())).map(String::as_str)
    }

    fn bad(section: &str, key: &str, msg: impl std::fmt::Display) -> CliError {
        CliError::Config(format!("{section}.{key}: {msg}"))
    }

    fn f64_or(&self, section: &str, key: &str, default: f64) -> Result<f64, CliError> {
        match self.raw(section, key) {
            None => Ok(default),
            Some(v) => parse_f64(v).map_err(|e| Self::bad(section, key, e)),
        }
    }

    fn usize_or(&self, section: &str, key: &str, default: usize) -> Result<usize, CliError> {
        match self.raw(section, key) {
            None => Ok(default),
            Some(v) => {
                v.parse().map_err(|_| Self::bad(section, key, format!("expected a non-negative integer, got `{v}`")))
            }
        }
    }

    fn bool_or(&self, section: &str, key: &str, default: bool) -> Result<bool, CliError> {
        match self.raw(section, key) {
            None => Ok(default),
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(v) => Err(Self::bad(section, key, format!("expected true or false, got `{v}`"))),
        }
    }

    fn auto_or(&self, section: &str, key: &str, default: Auto) -> Result<Auto, CliError> {
        match self.raw(section, key) {
            None => Ok(default),
            Some("auto") => Ok(Auto::Auto),
            Some(v) => parse_f64(v).map(Auto::Value).map_err(|e| Self::bad(section, key, e)),
        }
    }

    fn list_or(&self, section: &str, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.raw(section, key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| parse_f64(s.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Self::bad(section, key, e)),
        }
    }
}

fn parse_f64(v: &str) -> Result<f64, String> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number, got `{v}`")),
    }
}

fn require(ok: bool, section: &str, key: &str, msg: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(Reader::bad(section, key, msg))
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let source = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let text = String::from_utf8(source.clone())
            .map_err(|_| CliError::Config(format!("{}: not valid UTF-8", path.display())))?;
        Self::parse(&text, source)
    }

    pub fn parse(text: &str, source: Vec<u8>) -> Result<Self, CliError> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::Config(format!("syntax: {e}")))?;
        let mut values = BTreeMap::new();
        for (section, props) in ini.iter() {
            let Some(section) = section else {
                if let Some((key, _)) = props.iter().next() {
                    return Err(CliError::Config(format!("{key}: key outside of any section")));
                }
                continue;
            };
            let Some((_, known)) = SECTIONS.iter().find(|(name, _)| *name == section) else {
                return Err(CliError::Config(format!("[{section}]: unknown section")));
            };
            for (key, value) in props.iter() {
                if !known.contains(&key) {
                    return Err(CliError::Config(format!("{section}.{key}: unknown key")));
                }
                if values.insert((section.to_string(), key.to_string()), value.trim().to_string()).is_some() {
                    return Err(CliError::Config(format!("{section}.{key}: given twice")));
                }
            }
        }
        let r = Reader { values };
        let scenario = Scenario {
            materials: materials(&r)?,
            band: band(&r)?,
            eit: eit(&r)?,
            pulse: pulse(&r)?,
            output: OutputConfig {
                directory: PathBuf::from(r.raw("output", "directory").unwrap_or("out")),
                plot: r.bool_or("output", "plot", false)?,
            },
            source,
        };
        Ok(scenario)
    }
}

fn materials(r: &Reader) -> Result<MaterialsConfig, CliError> {
    const S: &str = "materials";
    let medium1 = match (r.raw(S, "medium1"), r.raw(S, "epsilon1")) {
        (Some(_), Some(_)) => return Err(Reader::bad(S, "epsilon1", "give either medium1 or epsilon1/mu1")),
        (_, Some(_)) => {
            let eps = r.f64_or(S, "epsilon1", 1.0)?;
            let mu = r.f64_or(S, "mu1", 1.0)?;
            require(eps > 0.0, S, "epsilon1", "must be > 0")?;
            require(mu > 0.0, S, "mu1", "must be > 0")?;
            Material::new(polariton::ResponseModel::Constant(eps), polariton::ResponseModel::Constant(mu), "dielectric")
                .map_err(|e| Reader::bad(S, "epsilon1", e))?
        }
        (name, None) => {
            if r.raw(S, "mu1").is_some() {
                return Err(Reader::bad(S, "mu1", "only valid together with epsilon1"));
            }
            let name = name.unwrap_or("dielectric-1.3");
            match Material::preset(name) {
                Some(m) if !m.epsilon.is_dispersive() && !m.mu.is_dispersive() => m,
                Some(_) => return Err(Reader::bad(S, "medium1", format!("`{name}` is not a dielectric"))),
                None => return Err(Reader::bad(S, "medium1", format!("unknown preset `{name}`"))),
            }
        }
    };

    let name2 = r.raw(S, "medium2").ok_or_else(|| Reader::bad(S, "medium2", "missing required key"))?;
    let magnetic = match name2 {
        "nimm-default" => true,
        "silver" => false,
        other => return Err(Reader::bad(S, "medium2", format!("unknown preset `{other}` (silver, nimm-default)"))),
    };
    let omega_e = r.f64_or(S, "omega_e", constants::SILVER_PLASMA_FREQUENCY)?;
    let gamma_e = r.f64_or(S, "gamma_e", constants::SILVER_LOSS_RATE)?;
    let omega_m_ratio = r.f64_or(S, "omega_m_ratio", constants::NIMM_MAGNETIC_RATIO)?;
    let gamma_m = r.f64_or(S, "gamma_m", constants::NIMM_MAGNETIC_LOSS_RATE)?;
    if !magnetic {
        for key in ["omega_m_ratio", "gamma_m"] {
            require(r.raw(S, key).is_none(), S, key, "only valid for medium2 = nimm-default")?;
        }
    }
    let electric = DrudeParams::new(omega_e, gamma_e).map_err(|e| Reader::bad(S, "omega_e", e))?;
    let medium2 = if magnetic {
        require(omega_m_ratio > 0.0, S, "omega_m_ratio", "must be > 0")?;
        let m = DrudeParams::new(omega_m_ratio * omega_e, gamma_m).map_err(|e| Reader::bad(S, "gamma_m", e))?;
        Material::nimm(electric, m, name2).map_err(|e| Reader::bad(S, "medium2", e))?
    } else {
        Material::drude_metal(electric, name2).map_err(|e| Reader::bad(S, "medium2", e))?
    };

    let reference = match r.raw(S, "reference").unwrap_or("silver") {
        "none" => None,
        "silver" => Some(Material::drude_metal(electric, "silver").map_err(|e| Reader::bad(S, "reference", e))?),
        other => return Err(Reader::bad(S, "reference", format!("expected silver or none, got `{other}`"))),
    };
    let polarization =
        r.raw(S, "polarization").unwrap_or("TM").parse().map_err(|e| Reader::bad(S, "polarization", e))?;
    Ok(MaterialsConfig {
        medium1,
        medium2,
        magnetic,
        omega_e,
        gamma_e,
        omega_m_ratio,
        gamma_m,
        reference,
        polarization,
    })
}

fn band(r: &Reader) -> Result<BandConfig, CliError> {
    const S: &str = "band";
    let b = BandConfig {
        omega_min_ratio: r.f64_or(S, "omega_min_ratio", 0.3)?,
        omega_max_ratio: r.f64_or(S, "omega_max_ratio", 0.5)?,
        points: r.usize_or(S, "points", 2001)?,
        kappa0: r.f64_or(S, "kappa0", constants::KAPPA0)?,
        gamma_m_ratio_min: r.f64_or(S, "gamma_m_ratio_min", 1e-5)?,
        gamma_m_ratio_max: r.f64_or(S, "gamma_m_ratio_max", 1.0)?,
        gamma_m_points: r.usize_or(S, "gamma_m_points", 41)?,
        abyss_coarse_points: r.usize_or(S, "abyss_coarse_points", 512)?,
    };
    require(b.omega_min_ratio > 0.0, S, "omega_min_ratio", "must be > 0")?;
    require(b.omega_max_ratio > b.omega_min_ratio, S, "omega_max_ratio", "must exceed omega_min_ratio")?;
    require(b.points > 0, S, "points", "band grid is empty")?;
    require(b.kappa0 > 0.0, S, "kappa0", "must be > 0")?;
    require(b.gamma_m_ratio_min > 0.0, S, "gamma_m_ratio_min", "must be > 0")?;
    require(b.gamma_m_ratio_max >= b.gamma_m_ratio_min, S, "gamma_m_ratio_max", "must be >= gamma_m_ratio_min")?;
    require(b.gamma_m_points > 0, S, "gamma_m_points", "loss-rate grid is empty")?;
    require(b.abyss_coarse_points >= 512, S, "abyss_coarse_points", "must be >= 512")?;
    Ok(b)
}

fn positive_auto(a: Auto, section: &str, key: &str) -> Result<(), CliError> {
    match a {
        Auto::Value(v) => require(v > 0.0, section, key, "must be > 0 or auto"),
        Auto::Auto => Ok(()),
    }
}

fn eit(r: &Reader) -> Result<EitConfig, CliError> {
    const S: &str = "eit";
    let orientation = match r.raw(S, "dipole_orientation").unwrap_or("x") {
        "x" => Orientation::X,
        "z" => Orientation::Z,
        other => return Err(Reader::bad(S, "dipole_orientation", format!("expected x or z, got `{other}`"))),
    };
    let e = EitConfig {
        omega31_ratio: r.auto_or(S, "omega31_ratio", Auto::Auto)?,
        density: r.f64_or(S, "density", 1e24)?,
        gamma21: r.f64_or(S, "gamma21", 1e3)?,
        gamma31: r.f64_or(S, "gamma31", 1e9)?,
        rabi_ratios: r.list_or(S, "rabi_ratios", &[0.5, 1.0, 2.0, 4.0])?,
        thickness: r.auto_or(S, "thickness", Auto::Auto)?,
        k1_probe: r.auto_or(S, "k1_probe", Auto::Auto)?,
        k1_control: r.auto_or(S, "k1_control", Auto::Auto)?,
        width: r.f64_or(S, "width", 2.5e-6)?,
        dipole: r.auto_or(S, "dipole", Auto::Auto)?.or(constants::atomic_dipole),
        orientation,
        alpha0: r.auto_or(S, "alpha0", Auto::Auto)?,
        detuning_max_ratio: r.f64_or(S, "detuning_max_ratio", 5.0)?,
        detuning_points: r.usize_or(S, "detuning_points", 401)?,
        length: r.f64_or(S, "length", 1e-3)?,
    };
    positive_auto(e.omega31_ratio, S, "omega31_ratio")?;
    require(e.density >= 0.0, S, "density", "must be >= 0")?;
    require(e.gamma21 >= 0.0, S, "gamma21", "must be >= 0")?;
    require(e.gamma31 > 0.0, S, "gamma31", "must be > 0")?;
    require(!e.rabi_ratios.is_empty(), S, "rabi_ratios", "list is empty")?;
    require(e.rabi_ratios.iter().all(|&x| x > 0.0), S, "rabi_ratios", "entries must be > 0")?;
    for (key, v) in [("thickness", e.thickness), ("k1_probe", e.k1_probe), ("k1_control", e.k1_control)] {
        positive_auto(v, S, key)?;
    }
    if let Auto::Value(a) = e.alpha0 {
        require(a >= 0.0, S, "alpha0", "must be >= 0 or auto")?;
    }
    require(e.width > 0.0, S, "width", "must be > 0")?;
    require(e.dipole > 0.0, S, "dipole", "must be > 0")?;
    require(e.detuning_max_ratio > 0.0, S, "detuning_max_ratio", "must be > 0")?;
    require(e.detuning_points > 0, S, "detuning_points", "detuning grid is empty")?;
    require(e.length >= 0.0, S, "length", "must be >= 0")?;
    Ok(e)
}

fn pulse(r: &Reader) -> Result<PulseConfig, CliError> {
    const S: &str = "pulse";
    let p = PulseConfig {
        delta_t: r.f64_or(S, "delta_t", 100e-9)?,
        distances: r.list_or(S, "distances", &[1e-3, 3e-3])?,
        kappa31: r.auto_or(S, "kappa31", Auto::Auto)?,
        v0: r.auto_or(S, "v0", Auto::Auto)?,
        n_nu: r.usize_or(S, "n_nu", 4096)?,
        nu_span_factor: r.f64_or(S, "nu_span_factor", 40.0)?,
        control_row: r.bool_or(S, "control_row", true)?,
    };
    require(p.delta_t > 0.0, S, "delta_t", "must be > 0")?;
    require(!p.distances.is_empty(), S, "distances", "list is empty")?;
    require(p.distances.iter().all(|&x| x > 0.0), S, "distances", "entries must be > 0")?;
    if let Auto::Value(k) = p.kappa31 {
        require(k >= 0.0, S, "kappa31", "must be >= 0 or auto")?;
    }
    positive_auto(p.v0, S, "v0")?;
    require(p.n_nu >= 1024 && p.n_nu.is_power_of_two(), S, "n_nu", "must be a power of two >= 1024")?;
    require(p.nu_span_factor >= 10.0, S, "nu_span_factor", "must be >= 10")?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Scenario, CliError> {
        Scenario::parse(text, text.as_bytes().to_vec())
    }

    #[test]
    fn minimal_scenario_uses_defaults() {
        let s = parse("[materials]\nmedium2 = nimm-default\n").unwrap();
        assert!(s.materials.magnetic);
        assert_eq!(s.band.points, 2001);
        assert_eq!(s.eit.rabi_ratios, vec![0.5, 1.0, 2.0, 4.0]);
        assert!(s.eit.alpha0.is_auto());
        assert_eq!(s.pulse.n_nu, 4096);
    }

    #[test]
    fn errors_name_the_key() {
        let cases = [
            ("[materials]\n", "materials.medium2"),
            ("[materials]\nmedium2 = nimm-default\ncolour = red\n", "materials.colour"),
            ("[materials]\nmedium2 = nimm-default\n[extra]\na = 1\n", "[extra]"),
            ("[materials]\nmedium2 = nimm-default\n[band]\npoints = 0\n", "band.points"),
            ("[materials]\nmedium2 = nimm-default\n[pulse]\nn_nu = 3000\n", "pulse.n_nu"),
            ("[materials]\nmedium2 = nimm-default\n[eit]\ngamma31 = -1\n", "eit.gamma31"),
            ("[materials]\nmedium2 = silver\ngamma_m = 1e11\n", "materials.gamma_m"),
            ("[materials]\nmedium2 = nimm-default\n[eit]\nrabi_ratios = 1, x\n", "eit.rabi_ratios"),
        ];
        for (text, key) in cases {
            match parse(text) {
                Err(CliError::Config(msg)) => assert!(msg.starts_with(key), "{msg}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn explicit_dielectric() {
        let s = parse("[materials]\nepsilon1 = 2.25\nmedium2 = silver\nreference = none\n").unwrap();
        assert!(!s.materials.magnetic && s.materials.reference.is_none());
        let r = s.materials.medium1.eval(1e15).unwrap();
        assert_eq!(r.epsilon.re, 2.25);
    }
}
