use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use super::{
    CatalogArgs, ConvertArgs, DumpGraphArgs, ExportMipArgs, ImportMipArgs, MipArgs, OracleArgs, ValidateArgs, EXIT_ERROR,
    EXIT_INFEASIBLE, EXIT_OK,
};
use crate::graph::{build_vehicle_graph, local_energy_bounds};
use crate::instances::evrptw::{evrptw_routes, evrptw_spec, parse_evrptw};
use crate::instances::tiny::{tiny_family, TINY_NAMES};
use crate::instances::{generate, GenSpec};
use crate::mip::{
    build_mip, decode_solution, encode_solution, oracle_solve, parse_values, shortest_route_start, write_lp, write_mst,
    MipOptions, OracleLimits,
};
use crate::model::io::{read_instance, read_solution, write_instance, write_solution};
use crate::model::{validate_solution, Configuration};

fn read_spec(path: Option<&PathBuf>) -> Result<GenSpec> {
    match path {
        None => Ok(GenSpec::default()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<i32> {
    let mut spec = read_spec(args.spec.as_ref())?;
    if let Some(s) = args.seed {
        spec.seed = s;
    }
    fs::create_dir_all(&args.out)?;
    let base = spec.clone();
    for i in 0..args.count {
        let mut s = base.clone();
        s.seed = base.seed.wrapping_add(i);
        if args.count > 1 {
            s.name = format!("{}-{i}", base.name);
        }
        let instance = generate(&s, None)?;
        let path = args.out.join(format!("{}.json", s.name));
        write_instance(&path, &instance)?;
        println!("{}", path.display());
    }
    Ok(EXIT_OK)
}

use super::GenerateArgs;

pub fn cmd_convert(args: &ConvertArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let data = parse_evrptw(&text)?;
    let routes = evrptw_routes(&data);
    let mut base = read_spec(args.spec.as_ref())?;
    if let Some(s) = args.seed {
        base.seed = s;
    }
    if args.spec.is_none() {
        base.name = args.input.file_stem().map_or("converted".into(), |s| s.to_string_lossy().into_owned());
    }
    let spec = evrptw_spec(&data, &routes, &base);
    let instance = generate(&spec, Some(&routes))?;
    create_parent(&args.out)?;
    write_instance(&args.out, &instance)?;
    println!("{}: {} vehicles, {} candidate stations", args.out.display(), instance.vehicles.len(), instance.station_count());
    Ok(EXIT_OK)
}

pub fn cmd_catalog(args: &CatalogArgs) -> Result<i32> {
    let names: Vec<&str> = if args.name == "all" { TINY_NAMES.to_vec() } else { vec![args.name.as_str()] };
    fs::create_dir_all(&args.out)?;
    for name in names {
        let instance = tiny_family(name)?;
        let path = args.out.join(format!("{name}.json"));
        write_instance(&path, &instance)?;
        println!("{}", path.display());
    }
    Ok(EXIT_OK)
}

fn mip_options(a: &MipArgs) -> MipOptions {
    MipOptions { copies: a.copies, full_dynamic_charge: !a.partial_dynamic, prefix_segments: !a.free_segments }
}

pub fn cmd_export_mip(args: &ExportMipArgs) -> Result<i32> {
    let instance = read_instance(&args.instance)?;
    let model = build_mip(&instance, mip_options(&args.mip))?;
    create_parent(&args.out)?;
    fs::write(&args.out, write_lp(&model))?;
    println!("{}: {} variables, {} rows", args.out.display(), model.vars.len(), model.rows.len());
    let Some(warm) = &args.warm_start else { return Ok(EXIT_OK) };
    let values = if warm == "shortest" {
        match shortest_route_start(&instance, &model) {
            Some(v) => v,
            None => bail!("the direct routes need charging; no shortest-route warm start exists"),
        }
    } else {
        let doc = read_solution(Path::new(warm))?;
        if let Err(v) = validate_solution(&instance, &doc.solution) {
            bail!("warm-start solution is invalid: {}", v[0]);
        }
        encode_solution(&instance, &model, &doc.solution)?
    };
    let bad = model.violations(&values, 1e-6);
    if !bad.is_empty() {
        bail!("warm start violates {} model rows, first: {}", bad.len(), bad[0]);
    }
    let mst = args.mst.clone().unwrap_or_else(|| args.out.with_extension("mst"));
    fs::write(&mst, write_mst(&model, &values))?;
    println!("{}: warm start with objective {:.9}", mst.display(), model.objective_value(&values));
    Ok(EXIT_OK)
}

pub fn cmd_import_mip(args: &ImportMipArgs) -> Result<i32> {
    let instance = read_instance(&args.instance)?;
    let model = build_mip(&instance, mip_options(&args.mip))?;
    let text = fs::read_to_string(&args.values).with_context(|| format!("reading {}", args.values.display()))?;
    let values = parse_values(&model, &text)?;
    let solution = decode_solution(&instance, &model, &values)?;
    if let Err(v) = validate_solution(&instance, &solution) {
        for x in &v {
            eprintln!("{x}");
        }
        bail!("decoded solution violates {} constraints", v.len());
    }
    create_parent(&args.out)?;
    write_solution(&args.out, &instance, &solution)?;
    println!("{}: total {:.9} (model objective {:.9})", args.out.display(), solution.total_cost, model.objective_value(&values));
    Ok(EXIT_OK)
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<i32> {
    let instance = read_instance(&args.instance)?;
    let doc = read_solution(&args.solution)?;
    if doc.instance != instance.name {
        log::warn!("solution was written for instance '{}', checking against '{}'", doc.instance, instance.name);
    }
    match validate_solution(&instance, &doc.solution) {
        Ok(()) => {
            println!("valid: total {:.9}", doc.solution.total_cost);
            Ok(EXIT_OK)
        }
        Err(v) => {
            for x in &v {
                println!("{x}");
            }
            println!("invalid: {} violations", v.len());
            Ok(EXIT_ERROR)
        }
    }
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<i32> {
    let instance = read_instance(&args.instance)?;
    let limits =
        OracleLimits { max_stations: args.max_stations, max_vehicles: args.max_vehicles, max_stops: args.max_stops };
    let result = oracle_solve(&instance, &limits)?;
    match result.solution {
        Some(s) => {
            println!("optimum {:.9} over {} configurations, built {}", s.total_cost, result.configurations, s.configuration.to_bits());
            if let Some(out) = &args.out {
                create_parent(out)?;
                write_solution(out, &instance, &s)?;
            }
            Ok(EXIT_OK)
        }
        None => {
            println!("infeasible over {} configurations", result.configurations);
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn parse_config(text: &str, instance: &crate::model::Instance) -> Result<Configuration> {
    match text {
        "full" => Ok(Configuration::full(instance)),
        "empty" => Ok(Configuration::empty(instance)),
        bits => {
            let bad = || anyhow::anyhow!("configuration '{bits}' is not `full`, `empty` or of the form `y=10 w=1 z=[110]`");
            let flags = |s: &str| s.chars().map(|b| b == '1').collect::<Vec<bool>>();
            let mut c = Configuration::empty(instance);
            for part in bits.split_whitespace() {
                let (key, val) = part.split_once('=').ok_or_else(bad)?;
                if !val.chars().all(|ch| matches!(ch, '0' | '1' | '[' | ']' | ',')) {
                    return Err(bad());
                }
                match key {
                    "y" => c.stationary = flags(val),
                    "w" => c.inverters = flags(val),
                    "z" => {
                        let inner = val.strip_prefix('[').and_then(|v| v.strip_suffix(']')).ok_or_else(bad)?;
                        c.segments = if inner.is_empty() { Vec::new() } else { inner.split(',').map(flags).collect() };
                    }
                    _ => return Err(bad()),
                }
            }
            let empty = Configuration::empty(instance);
            let shape = |x: &Configuration| {
                (x.stationary.len(), x.inverters.len(), x.segments.iter().map(Vec::len).collect::<Vec<_>>())
            };
            if shape(&c) != shape(&empty) {
                bail!("configuration '{bits}' does not match the instance's candidate stations");
            }
            Ok(c)
        }
    }
}

pub fn cmd_dump_graph(args: &DumpGraphArgs) -> Result<i32> {
    let instance = read_instance(&args.instance)?;
    if args.vehicle >= instance.vehicles.len() {
        bail!("vehicle {} out of range (instance has {})", args.vehicle, instance.vehicles.len());
    }
    let config = parse_config(&args.config, &instance)?;
    let bounds = local_energy_bounds(&instance, args.vehicle);
    print!("{}", build_vehicle_graph(&instance, &bounds, args.vehicle, &config).dump());
    Ok(EXIT_OK)
}
