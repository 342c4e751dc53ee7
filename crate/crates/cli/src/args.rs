//! Command-line flags.

use std::path::PathBuf;

use clap::Parser;

use crate::config::{keys_help, RunConfig};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "bosegas", version, about = "Scattering lengths, energy bounds, GP/TF and Bogolubov sweeps", after_help = keys_help())]
pub struct Cli {
    /// scatter, bounds, gp, tf, gp-tf-limit, foldy, bogolubov or verify
    pub command: Option<String>,
    #[arg(long = "command", value_name = "NAME")]
    pub command_flag: Option<String>,
    /// Flat JSON object of parameters; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamFlags,
}

macro_rules! param_flags {
    ($($field:ident => $help:literal),* $(,)?) => {
        #[derive(Debug, Default, clap::Args)]
        pub struct ParamFlags {
            $(
                #[doc = $help]
                #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
                pub $field: Option<String>,
            )*
        }

        impl ParamFlags {
            /// `(key, value)` pairs of the flags that were given.
            pub fn pairs(&self) -> Vec<(String, String)> {
                let mut out = Vec::new();
                $(
                    if let Some(v) = &self.$field {
                        out.push((stringify!($field).to_string(), v.clone()));
                    }
                )*
                out
            }
        }
    };
}

param_flags! {
    potential => "Pair potential, e.g. hardcore:r0=1 or squarewell:r0=1,v0=5[,tail=C/p@onset]",
    trap => "Trap, e.g. harmonic:scale=1, power:s=4,scale=1 or box:l=2",
    dim => "Spatial dimension, 2 or 3",
    mu => "Kinetic constant μ (ħ²/2m)",
    grid_points => "Nodes of the scattering grid inside the range",
    radius => "Radius R for the energy integral",
    y_grid => "Dilution parameter Y = 4πρa³/3 (3D) or ρa² (2D), number or sweep",
    a => "Scattering length; the coupling α for 2D GP/TF",
    c_lsy => "Constant C in the lower bound 1 - C Y^(1/17)",
    n => "Particle number",
    cells => "Radial cells of the GP grid",
    r_max => "Outer radius of the GP grid",
    g_grid => "Couplings g = Na for the GP/TF comparison",
    rho_grid => "Densities for the Foldy comparison",
    scaling_n => "Particle numbers for the two-component scaling model",
    mode_a => "Diagonal coefficient A of the pair mode",
    mode_b => "Off-diagonal coefficient B of the pair mode",
    n_max => "Pair-quanta truncation limit of the Fock oracle",
    seed => "Seed of the random cases in verify",
    output => "Output file (stdout if absent)",
    format => "csv or json",
    abs_tol => "Absolute tolerance override",
    rel_tol => "Relative tolerance override",
    max_iter => "Iteration cap override",
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        if let (Some(a), Some(b)) = (&self.command, &self.command_flag) {
            if a != b {
                return Err(CliError::Parse {
                    location: "--command".into(),
                    message: format!("positional command `{a}` conflicts with --command `{b}`"),
                });
            }
        }
        let hint = self.command.or(self.command_flag);
        let flags = self.params.pairs();
        match &self.config {
            Some(path) => RunConfig::load(path, &flags, hint.as_deref()),
            None => RunConfig::assemble(hint.as_deref(), None, &flags),
        }
    }
}
