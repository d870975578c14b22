use std::fs;
use std::path::Path;

use verlinde_core::fusion::{cross_check_table, Guards};
use verlinde_core::io::{
    fusion_table_to_csv, fusion_table_to_json, fusion_table_to_text, parse_ik_generators,
    parse_involution_config, DescribeReport, FusionCache, IkSource, Lookup, RealReport,
};
use verlinde_core::kr_algebra::spin_c_classify;
use verlinde_core::real_structure::{preset, validate, Preset, RealInvolutionDatum};
use verlinde_core::real_verlinde::verify_module_structure;
use verlinde_core::{CartanType, Error, FusionTable, Report, Result, RootDatum};

use crate::{Cli, Command, ComputeArgs, Format, OutputArgs, RealArgs, TypeArgs};

pub fn run(cli: Cli) -> Result<u8> {
    let cache = FusionCache::new(cli.cache_dir.clone().unwrap_or_else(FusionCache::default_dir));
    match cli.command {
        Command::Describe(a) => {
            let datum = root_datum(&a.ty)?;
            let report = DescribeReport::new(&datum);
            let json = to_json(&report);
            emit(&a.out, &json, || Ok(report.render_text()))?;
            Ok(0)
        }
        Command::Fusion(a) => {
            let datum = root_datum(&a.ty)?;
            let table = fusion_table(&datum, &a.compute, &cache)?;
            let json = fusion_table_to_json(&table);
            if a.out.format == Format::Csv {
                write_json_file(&a.out, &json)?;
                print!("{}", fusion_table_to_csv(&table)?);
            } else {
                emit(&a.out, &json, || Ok(fusion_table_to_text(&table)))?;
            }
            Ok(0)
        }
        Command::Real(a) => {
            let datum = root_datum(&a.ty)?;
            let inv = involution(&datum, &a)?;
            let table = fusion_table(&datum, &a.compute, &cache)?;
            let ik = match &a.ik_generators {
                Some(p) => IkSource::Supplied(parse_ik_generators(&read(p)?, &datum)?),
                None => IkSource::Builtin,
            };
            let report = RealReport::compute(&datum, &inv, &table, ik)?;
            emit(&a.out, &report.to_json(), || Ok(report.render_text()))?;
            Ok(0)
        }
        Command::Validate(a) => cmd_validate(&a, &cache),
        Command::Spinc(a) => {
            let c = spin_c_classify(a.r, a.s, a.p, a.q)?;
            match a.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "r": a.r, "s": a.s, "p": a.p, "q": a.q,
                        "classification": c.to_string(),
                    });
                    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
                }
                Format::Csv => println!("r,s,p,q,classification\n{},{},{},{},{c}", a.r, a.s, a.p, a.q),
                Format::Table => println!("{c}"),
            }
            Ok(0)
        }
    }
}

fn root_datum(ty: &TypeArgs) -> Result<RootDatum> {
    let family = ty.family.parse()?;
    Ok(RootDatum::new(CartanType::new(family, ty.rank)?))
}

fn guards(c: &ComputeArgs) -> Guards {
    Guards {
        max_reflections: c.max_steps,
        max_alcove: c.max_alcove,
    }
}

fn fusion_table(datum: &RootDatum, c: &ComputeArgs, cache: &FusionCache) -> Result<FusionTable> {
    let g = guards(c);
    if c.no_cache {
        return FusionTable::compute_with(datum, c.level, g, c.parallel);
    }
    let (table, warnings) = cache.get_or_compute(datum, c.level, g, c.parallel)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(table)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn involution(datum: &RootDatum, a: &RealArgs) -> Result<RealInvolutionDatum> {
    match (&a.preset, &a.involution) {
        (_, Some(path)) => parse_involution_config(
            &read(path)?,
            &path.display().to_string(),
            datum,
            a.compute.level,
        ),
        (Some(name), None) => preset(datum, name.parse()?),
        (None, None) => Err(Error::Input("give --preset or --involution".into())),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn write_json_file(out: &OutputArgs, json: &str) -> Result<()> {
    if let Some(p) = &out.json {
        fs::write(p, json).map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn emit(out: &OutputArgs, json: &str, text: impl FnOnce() -> Result<String>) -> Result<()> {
    write_json_file(out, json)?;
    match out.format {
        Format::Json => print!("{json}"),
        Format::Table => print!("{}", text()?),
        Format::Csv => return Err(Error::Input("csv output is only available for fusion and spinc".into())),
    }
    Ok(())
}

fn cmd_validate(a: &RealArgs, cache: &FusionCache) -> Result<u8> {
    let datum = root_datum(&a.ty)?;
    let k = a.compute.level;
    let invs: Vec<RealInvolutionDatum> = if a.preset.is_some() || a.involution.is_some() {
        vec![involution(&datum, a)?]
    } else {
        Preset::ALL.iter().filter_map(|p| preset(&datum, *p).ok()).collect()
    };

    let mut report = Report::new();
    let mut numeric_failure = false;

    if !a.compute.no_cache {
        if let Lookup::Corrupt(why) = cache.load(datum.cartan_type(), k) {
            report.push("cache_entry", false, why);
        } else {
            report.push("cache_entry", true, "");
        }
    }
    let table = FusionTable::compute_with(&datum, k, guards(&a.compute), a.compute.parallel)?;
    match cross_check_table(&datum, &table, guards(&a.compute)) {
        Ok(dev) => report.push("cross_method_fusion", true, format!("max deviation {dev:.2e}")),
        Err(e @ Error::Resource(_)) => return Err(e),
        Err(e) => {
            numeric_failure = true;
            report.push("cross_method_fusion", false, e.to_string());
        }
    }
    for inv in &invs {
        let prefix = inv.name().to_string();
        let mut sub = validate(inv, &datum, k);
        if sub.passed() {
            sub.extend(verify_module_structure(&datum, inv, k));
        }
        for c in sub.checks {
            report.push(format!("{prefix}/{}", c.name), c.passed, c.detail);
        }
    }

    let json = to_json(&report);
    emit(&a.out, &json, || Ok(report.to_string()))?;
    Ok(match (report.passed(), numeric_failure) {
        (true, _) => 0,
        (false, true) => 2,
        (false, false) => 1,
    })
}
