//! The TOML configuration file. Only the `[portrait]` table is read today:
//!
//! ```toml
//! [portrait]
//! viewport = [-2.0, 2.0, -2.0, 2.0]   # xmin, xmax, ymin, ymax
//! seeds = 10                           # seeds per side of the grid
//! min_step = 1e-7
//! max_step = 0.05
//! tolerance = 1e-8                     # position error over a whole streamline
//! max_arc_length = 8.0
//! stop_radius = 0.02                   # distance at which singular points stop a leaf
//! width = 480                          # pixels per panel
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::portrait::PortraitConfig;

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub portrait: PortraitConfig,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let c: Config = toml::from_str(text).map_err(|e| e.to_string())?;
        c.portrait.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_tables_keep_defaults() {
        let c = Config::parse("[portrait]\nseeds = 3\nviewport = [0.0, 1.0, -1.0, 1.0]\n").unwrap();
        assert_eq!(c.portrait.seeds, 3);
        assert_eq!(c.portrait.tolerance, PortraitConfig::default().tolerance);
        assert_eq!(Config::parse("").unwrap(), Config::default());
        assert!(Config::parse("[portrait]\ntolerance = -1.0\n").is_err());
        assert!(Config::parse("[portrait]\ncolour = 1\n").is_err());
    }
}
