//! Config files: a flat JSON object of option values, keyed by long flag
//! name. A value from the file replaces a default but never a flag given on
//! the command line.

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::parser::ValueSource;
use clap::ArgMatches;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::sources::load_json;

pub struct ConfigFile {
    values: Map<String, Value>,
}

impl ConfigFile {
    pub fn empty() -> Self {
        ConfigFile { values: Map::new() }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let v: Value = load_json(path)?;
        let Value::Object(raw) = v else {
            bail!("config {} must be a JSON object", path.display());
        };
        let values = raw.into_iter().map(|(k, v)| (k.replace('-', "_"), v)).collect();
        Ok(ConfigFile { values })
    }

    /// Fills `args` from the file wherever `matches` shows the value did not
    /// come from the command line. Consumed keys are removed.
    pub fn apply<T: Serialize + DeserializeOwned>(&mut self, args: &T, matches: &ArgMatches) -> Result<T> {
        let Value::Object(mut fields) = serde_json::to_value(args)? else {
            bail!("option set is not a JSON object");
        };
        let keys: Vec<String> = fields.keys().cloned().collect();
        for key in keys {
            let Some(v) = self.values.remove(&key) else {
                continue;
            };
            let explicit = matches!(
                matches.try_get_raw(&key).ok().and(matches.value_source(&key)),
                Some(ValueSource::CommandLine)
            );
            if !explicit {
                fields.insert(key, v);
            }
        }
        serde_json::from_value(Value::Object(fields)).context("config value has the wrong type")
    }

    /// Fails on keys no option consumed.
    pub fn finish(self) -> Result<()> {
        if let Some(k) = self.values.keys().next() {
            bail!("unknown config key `{k}`");
        }
        Ok(())
    }
}
