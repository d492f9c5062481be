//! Driving an experiment from a `key = value` config, as the `run`
//! subcommand does.

use caustics::run::run;
use caustics::RunConfig;

fn main() -> caustics::Result<()> {
    let mut cfg = RunConfig::parse(
        "model = rotor\n\
         mode = domain-d\n\
         kick = 2.4\n\
         nx = 64\n\
         ny = 64\n",
    )?;
    cfg.set("output", "out/run_config")?;
    for (k, v) in cfg.entries() {
        println!("{k:>16} = {v}");
    }
    for f in run(&cfg)? {
        println!("wrote {}", f.display());
    }
    Ok(())
}
