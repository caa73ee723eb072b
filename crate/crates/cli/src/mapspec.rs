//! Textual map descriptors.
//!
//! | spec | map |
//! |---|---|
//! | `phi:<n>:<k>` | cyclic map on `n` levels, shift `k` |
//! | `phi0`, `psi0` | two-level maps |
//! | `phi33`, `phi33p` | three-level cyclic maps, shift 1 and 2 |
//! | `phi4:<v>` | four-level cyclic map, shift `v` |
//! | `delta:<t1>,<t2>,...` | diagonal-weight map |
//! | `psipi:<p0>,<p1>,...` | cyclic construction over a zero-based permutation |

use entmap_core::posmaps::{MapDescriptor, MapFamily};

use crate::error::{CliError, CliResult};

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

fn list<T: std::str::FromStr>(spec: &str, body: &str) -> CliResult<Vec<T>> {
    body.split(',').map(|x| x.trim().parse().map_err(|_| usage(format!("bad entry {x:?} in map spec {spec:?}")))).collect()
}

fn int(spec: &str, x: &str) -> CliResult<usize> {
    x.parse().map_err(|_| usage(format!("bad integer {x:?} in map spec {spec:?}")))
}

pub fn parse_family(spec: &str) -> CliResult<MapFamily> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    let family = match parts.as_slice() {
        ["phi", n, k] => MapFamily::PhiNK { n: int(spec, n)?, k: int(spec, k)? },
        ["phi0"] => MapFamily::Phi0,
        ["psi0"] => MapFamily::Psi0,
        ["phi33"] => MapFamily::Phi33,
        ["phi33p"] => MapFamily::Phi33Prime,
        ["phi4", v] => MapFamily::Phi4 { variant: int(spec, v)? },
        ["delta", t] => MapFamily::DeltaT { t: list(spec, t)? },
        ["psipi", p] => MapFamily::PsiPi { pi: list(spec, p)? },
        _ => return Err(usage(format!("unrecognised map spec {spec:?}"))),
    };
    family.validate()?;
    Ok(family)
}

/// Descriptor at the family's own support.
pub fn parse_map(spec: &str) -> CliResult<MapDescriptor> {
    Ok(MapDescriptor::new(parse_family(spec)?)?)
}

/// Maps tried by `detect` when none are given: the two-level swap map and
/// every cyclic map fitting the first factor.
pub fn default_detect_maps(first_dim: usize) -> Vec<MapDescriptor> {
    let mut maps = Vec::new();
    if first_dim >= 2 {
        maps.push(MapDescriptor::new(MapFamily::Phi0).expect("valid"));
    }
    maps.extend(cyclic_maps_up_to(first_dim));
    maps
}

/// `phi:<n>:<k>` for `3 ≤ n ≤ max_n`, `1 ≤ k < n`.
pub fn cyclic_maps_up_to(max_n: usize) -> Vec<MapDescriptor> {
    (3..=max_n).flat_map(|n| (1..n).map(move |k| MapDescriptor::phi_nk(n, k).expect("valid"))).collect()
}

/// Every cyclic map on exactly `n` levels.
pub fn cyclic_maps(n: usize) -> Vec<MapDescriptor> {
    (1..n).map(|k| MapDescriptor::phi_nk(n, k).expect("valid")).collect()
}
