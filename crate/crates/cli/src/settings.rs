//! Per-command settings: shipped defaults overlaid by the user's config file.
//!
//! The default file of a command defines its key set, so a key missing from
//! the defaults is unknown and rejected.

use dicke_stark::config::Config;
use dicke_stark::{linspace, Error, Result};

pub struct Settings {
    keys: Vec<String>,
    defaults: Config,
    user: Config,
}

fn key_set(text: &str) -> Vec<String> {
    text.lines()
        .filter_map(|l| l.split('#').next()?.split_once('='))
        .map(|(k, _)| k.trim().to_string())
        .filter(|k| !k.is_empty() && k != "format_version")
        .collect()
}

impl Settings {
    pub fn load(defaults: &str, user: Option<&str>) -> Result<Self> {
        let keys = key_set(defaults);
        let allowed: Vec<&str> = keys.iter().map(String::as_str).collect();
        let defaults = Config::parse(defaults, &allowed)?;
        let user = Config::parse(user.unwrap_or(""), &allowed)?;
        Ok(Settings { keys, defaults, user })
    }

    fn pick(&self, key: &str) -> &Config {
        if self.user.contains(key) {
            &self.user
        } else {
            &self.defaults
        }
    }

    pub fn error(&self, key: &str, message: impl Into<String>) -> Error {
        self.pick(key).error(key, message)
    }

    fn required<T>(&self, key: &str, v: Result<Option<T>>) -> Result<T> {
        v?.ok_or_else(|| self.error(key, format!("missing key `{key}`")))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        self.required(key, self.pick(key).f64(key))
    }

    pub fn positive(&self, key: &str) -> Result<f64> {
        let x = self.f64(key)?;
        if x > 0.0 {
            Ok(x)
        } else {
            Err(self.error(key, format!("`{key}` must be > 0, got {x}")))
        }
    }

    pub fn nonnegative(&self, key: &str) -> Result<f64> {
        let x = self.f64(key)?;
        if x >= 0.0 {
            Ok(x)
        } else {
            Err(self.error(key, format!("`{key}` must be >= 0, got {x}")))
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.required(key, self.pick(key).usize(key))
    }

    pub fn count(&self, key: &str) -> Result<usize> {
        match self.usize(key)? {
            0 => Err(self.error(key, format!("`{key}` must be at least 1"))),
            n => Ok(n),
        }
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let v = self.required(key, self.pick(key).f64_list(key))?;
        if v.is_empty() {
            return Err(self.error(key, format!("`{key}` is empty")));
        }
        Ok(v)
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>> {
        self.required(key, self.pick(key).usize_list(key))
    }

    pub fn string(&self, key: &str) -> Result<&str> {
        self.pick(key).string(key).ok_or_else(|| self.error(key, format!("missing key `{key}`")))
    }

    /// `None` for the literal `auto`.
    pub fn f64_or_auto(&self, key: &str) -> Result<Option<f64>> {
        if self.string(key)? == "auto" {
            return Ok(None);
        }
        self.positive(key).map(Some)
    }

    /// `linspace(min, max, points)` from `{name}_min{unit}`, `{name}_max{unit}`
    /// and `{name}_points`.
    pub fn grid(&self, name: &str, unit: &str) -> Result<Vec<f64>> {
        let (kmin, kmax, kn) = (format!("{name}_min{unit}"), format!("{name}_max{unit}"), format!("{name}_points"));
        let (a, b) = (self.f64(&kmin)?, self.f64(&kmax)?);
        let n = self.usize(&kn)?;
        if n == 0 {
            return Err(self.error(&kn, format!("empty {name} range")));
        }
        if b < a {
            return Err(self.error(&kmax, format!("`{kmax}` = {b} is below `{kmin}` = {a}")));
        }
        Ok(linspace(a, b, n))
    }

    /// Effective `(key, value)` pairs in default-file order.
    pub fn effective(&self) -> Vec<(String, String)> {
        self.keys
            .iter()
            .map(|k| (k.clone(), self.pick(k).string(k).unwrap_or_default().to_string()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEFAULTS: &str = "# d\na_over_wc = 0.5\nn = 3\nx_min = 0\nx_max = 1\nx_points = 3\n";

    #[test]
    fn user_overrides_defaults() {
        let s = Settings::load(DEFAULTS, Some("\nn = 7\n")).unwrap();
        assert_eq!(s.usize("n").unwrap(), 7);
        assert_eq!(s.f64("a_over_wc").unwrap(), 0.5);
        assert_eq!(s.grid("x", "").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(s.effective()[1], ("n".to_string(), "7".to_string()));
    }

    #[test]
    fn unknown_key_and_empty_range() {
        assert_eq!(
            Settings::load(DEFAULTS, Some("n = 1\n\nb = 2\n")).err(),
            Some(Error::Config { line: 3, message: "unknown key `b`".into() })
        );
        let s = Settings::load(DEFAULTS, Some("x_points = 0\n")).unwrap();
        assert!(matches!(s.grid("x", ""), Err(Error::Config { line: 1, .. })));
    }
}
