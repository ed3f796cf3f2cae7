use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use atomc_core::circuit::{generate, parse_qasm};
use atomc_core::hardware::HardwareError;
use atomc_core::{Circuit, GateTag, HardwareSpec, NativeSet};

use crate::args::{HardwareArgs, InputArgs};

pub const HW_DIR_VAR: &str = "ATOMC_HW_DIR";

/// Looks `name` up as a preset, then as a path, then inside `$ATOMC_HW_DIR`
/// (with and without a `.json` suffix).
pub fn resolve_hardware(name: &str) -> Result<HardwareSpec> {
    if let Ok(spec) = HardwareSpec::preset(name) {
        return Ok(spec);
    }
    let mut candidates = vec![PathBuf::from(name)];
    if let Some(dir) = env::var_os(HW_DIR_VAR) {
        let dir = PathBuf::from(dir);
        candidates.push(dir.join(name));
        candidates.push(dir.join(format!("{name}.json")));
    }
    if let Some(path) = candidates.iter().find(|p| p.is_file()) {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return HardwareSpec::from_json(&text).with_context(|| format!("loading {}", path.display()));
    }
    Err(HardwareError::UnknownPreset(name.to_string()))
        .context("not a preset, a readable spec file, or an entry in $ATOMC_HW_DIR")
}

pub fn hardware(args: &HardwareArgs) -> Result<HardwareSpec> {
    let mut spec = resolve_hardware(&args.hw)?;
    if let Some((rows, cols)) = args.grid {
        spec = spec.with_grid(rows, cols);
    }
    if let Some(r) = args.rint {
        spec = spec.with_interaction_radius(r);
    }
    if let Some(r) = args.rre {
        spec = spec.with_restriction_radius(r);
    }
    if let Some(mode) = args.idle_mode {
        spec = spec.with_idle_mode(mode);
    }
    spec.validate().context("hardware overrides")?;
    Ok(spec)
}

pub fn native_set(args: &HardwareArgs) -> NativeSet {
    let set = NativeSet::with_flags(args.cp_native, !args.decompose_multiqubit);
    if args.lower_cx {
        set
    } else {
        set.with(GateTag::Cx)
    }
}

pub fn load_input(input: &InputArgs, seed: u64) -> Result<Circuit> {
    match (&input.qasm, input.bench) {
        (Some(path), _) => read_qasm(path),
        (None, Some(kind)) => {
            let n = input.n.context("--bench needs --n")?;
            Ok(generate(kind, n, seed)?)
        }
        (None, None) => bail!("no input: pass --qasm or --bench"),
    }
}

fn read_qasm(path: &Path) -> Result<Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_qasm(&text).with_context(|| format!("parsing {}", path.display()))
}

/// `START:STOP[:STEP]` (inclusive, step 1 by default) or `a,b,c`.
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = if s.contains(':') {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad number `{p}` in range `{s}`")))
            .collect::<Result<_>>()?;
        let (start, stop, step) = match parts[..] {
            [a, b] => (a, b, 1.0),
            [a, b, c] => (a, b, c),
            _ => bail!("range `{s}` is not START:STOP[:STEP]"),
        };
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
            bail!("range `{s}` needs finite bounds and a positive step");
        }
        let count = ((stop - start) / step + 1e-9).floor();
        if count < 0.0 {
            Vec::new()
        } else {
            (0..=count as usize).map(|i| start + i as f64 * step).collect()
        }
    } else {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad number `{p}` in `{s}`")))
            .collect::<Result<_>>()?
    };
    if values.is_empty() {
        bail!("range `{s}` is empty");
    }
    Ok(values)
}

pub fn parse_counts(s: &str) -> Result<Vec<usize>> {
    parse_values(s)?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                bail!("`{v}` in `{s}` is not a positive integer")
            }
        })
        .collect()
}
