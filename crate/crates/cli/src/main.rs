mod args;
mod commands;
mod config;
mod output;
mod sources;

use std::cell::Cell;
use std::process::ExitCode;

use anyhow::Result;
use clap::{ArgMatches, CommandFactory, FromArgMatches};
use serde::Serialize;

use args::{Bb84Cmd, BellCmd, CanonicalCmd, CheckCmd, Cli, Group, LevelsetCmd, ModelCmd, PpmCmd, SplitCmd};
use commands::{Ctx, Rejected};
use config::ConfigFile;
use output::{emit, Report};

const EXIT_FAILED: u8 = 1;
const EXIT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let output = cli.global.output.clone();
    match run(cli, &matches) {
        Ok((report, ctx)) => {
            let write = if ctx.stdout_taken.get() && output.is_none() {
                Ok(())
            } else {
                emit(&report, output.as_deref())
            };
            if let Err(e) = write {
                return fail(&e);
            }
            match report.verdict {
                Some(false) => ExitCode::from(EXIT_FAILED),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            if let Some(r) = e.downcast_ref::<Rejected>() {
                if let Err(w) = emit(&r.report, output.as_deref()) {
                    eprintln!("error: {w:#}");
                }
            }
            fail(&e)
        }
    }
}

fn fail(e: &anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    if let Some(r) = e.chain().find_map(|c| c.downcast_ref::<tracerule::Error>()).and_then(|t| t.residual()) {
        eprintln!("residual: {r}");
    }
    ExitCode::from(EXIT_ERROR)
}

fn leaf(matches: &ArgMatches) -> &ArgMatches {
    let mut m = matches;
    while let Some((_, sub)) = m.subcommand() {
        m = sub;
    }
    m
}

fn run(cli: Cli, matches: &ArgMatches) -> Result<(Report, Ctx)> {
    let mut config = match &cli.global.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::empty(),
    };
    let m = leaf(matches);
    let mut global = config.apply(&cli.global, m)?;
    global.config = cli.global.config.clone();

    macro_rules! go {
        ($name:literal, $args:expr, $f:path) => {{
            let a = config.apply(&$args, m)?;
            config.finish()?;
            let ctx = context($name, &global, &a)?;
            let report = $f(a, &ctx)?;
            Ok((report, ctx))
        }};
    }

    match cli.group {
        Group::Model(ModelCmd::Validate(a)) => go!("model validate", a, commands::model_validate),
        Group::Ppm(PpmCmd::Generate(a)) => go!("ppm generate", a, commands::ppm_generate),
        Group::Ppm(PpmCmd::Distance(a)) => go!("ppm distance", a, commands::ppm_distance),
        Group::Ppm(PpmCmd::Envelop(a)) => go!("ppm envelop", a, commands::ppm_envelop),
        Group::Canonical(CanonicalCmd::Build(a)) => go!("canonical build", a, commands::canonical_build),
        Group::Split(SplitCmd::Build(a)) => go!("split build", a, commands::split_build),
        Group::Holevo(a) => go!("holevo", a, commands::holevo),
        Group::Bb84(Bb84Cmd::Attack(a)) => go!("bb84 attack", a, commands::bb84_attack),
        Group::Bb84(Bb84Cmd::Envelop(a)) => go!("bb84 envelop", a, commands::bb84_envelop),
        Group::Bell(BellCmd::Scan(a)) => go!("bell scan", a, commands::bell_scan),
        Group::Bell(BellCmd::Max(a)) => go!("bell max", a, commands::bell_max),
        Group::Bell(BellCmd::Orbit(a)) => go!("bell orbit", a, commands::bell_orbit),
        Group::Check(CheckCmd::Nosignal(a)) => go!("check nosignal", a, commands::check_nosignal),
        Group::Check(CheckCmd::Reach(a)) => go!("check reach", a, commands::check_reach),
        Group::Check(CheckCmd::Marginals(a)) => go!("check marginals", a, commands::check_marginals),
        Group::Levelset(LevelsetCmd::Probe(a)) => go!("levelset probe", a, commands::levelset_probe),
    }
}

/// Effective configuration: every option of the command with defaults
/// resolved, plus the global options.
fn context<T: Serialize>(command: &'static str, global: &args::GlobalArgs, args: &T) -> Result<Ctx> {
    let mut config = serde_json::to_value(args)?;
    let g = serde_json::to_value(global)?;
    if let (Some(c), serde_json::Value::Object(g)) = (config.as_object_mut(), g) {
        c.extend(g);
    }
    Ok(Ctx {
        command,
        seed: global.seed,
        csv: global.csv.clone(),
        config,
        stdout_taken: Cell::new(false),
    })
}
