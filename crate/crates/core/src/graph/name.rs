//! Vertex names, ports and labels.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::GraphError;

/// Hierarchical vertex name: a base symbol followed by a (possibly empty)
/// list of natural-number tags, written `base.t1.t2`.
///
/// Renamings act on the base only, so a tagged name follows its base
/// around. Local rules create fresh vertices by extending the tags of an
/// input vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexName {
    base: Arc<str>,
    tags: Vec<u32>,
}

fn valid_base(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

impl VertexName {
    /// A tagless name. Panics if `base` is not over `[a-z0-9_]`; use
    /// [`str::parse`] for fallible construction.
    pub fn new(base: &str) -> Self {
        assert!(valid_base(base), "invalid vertex base {base:?}");
        VertexName {
            base: Arc::from(base),
            tags: Vec::new(),
        }
    }

    pub fn with_tags(base: &str, tags: &[u32]) -> Self {
        let mut n = VertexName::new(base);
        n.tags.extend_from_slice(tags);
        n
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<str> {
        &self.base
    }

    pub fn tags(&self) -> &[u32] {
        &self.tags
    }

    /// `self` with one more tag appended.
    pub fn child(&self, tag: u32) -> Self {
        let mut n = self.clone();
        n.tags.push(tag);
        n
    }

    /// `self` with `tags` appended.
    pub fn extend(&self, tags: &[u32]) -> Self {
        let mut n = self.clone();
        n.tags.extend_from_slice(tags);
        n
    }

    /// Same tags, different base.
    pub fn rebase(&self, base: &Arc<str>) -> Self {
        VertexName {
            base: base.clone(),
            tags: self.tags.clone(),
        }
    }

    /// If `prefix` is `self` with some tags removed from the end, the
    /// removed tags.
    pub fn strip_prefix(&self, prefix: &VertexName) -> Option<&[u32]> {
        if self.base == prefix.base && self.tags.starts_with(&prefix.tags) {
            Some(&self.tags[prefix.tags.len()..])
        } else {
            None
        }
    }

    /// Every prefix of this name, longest first (the name itself included).
    pub fn prefixes(&self) -> impl Iterator<Item = VertexName> + '_ {
        (0..=self.tags.len()).rev().map(move |k| VertexName {
            base: self.base.clone(),
            tags: self.tags[..k].to_vec(),
        })
    }
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        for t in &self.tags {
            write!(f, ".{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for VertexName {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split('.');
        let base = parts.next().unwrap_or_default();
        if !valid_base(base) {
            return Err(GraphError::BadName(s.to_string()));
        }
        let tags = parts
            .map(|p| p.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| GraphError::BadName(s.to_string()))?;
        Ok(VertexName {
            base: Arc::from(base),
            tags,
        })
    }
}

impl From<&str> for VertexName {
    fn from(s: &str) -> Self {
        s.parse().unwrap_or_else(|e| panic!("{e}"))
    }
}

macro_rules! symbol_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(s: &str) -> Self {
                $name(Arc::from(s))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }
    };
}

symbol_newtype!(
    /// A port symbol drawn from the signature's port set.
    Port
);
symbol_newtype!(
    /// A vertex or edge label.
    Label
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let n: VertexName = "a.0.12".parse().unwrap();
        assert_eq!(n.base(), "a");
        assert_eq!(n.tags(), &[0, 12]);
        assert_eq!(n.to_string(), "a.0.12");
        assert!("A".parse::<VertexName>().is_err());
        assert!("a.x".parse::<VertexName>().is_err());
        assert!("".parse::<VertexName>().is_err());
    }

    #[test]
    fn equality_is_componentwise() {
        assert_eq!(VertexName::with_tags("a", &[1]), "a.1".into());
        assert_ne!(VertexName::with_tags("a", &[1]), VertexName::new("a"));
        assert_ne!(VertexName::new("a1"), VertexName::with_tags("a", &[1]));
    }

    #[test]
    fn prefixes_longest_first() {
        let n: VertexName = "b.3.4".into();
        let p: Vec<String> = n.prefixes().map(|p| p.to_string()).collect();
        assert_eq!(p, vec!["b.3.4", "b.3", "b"]);
        assert_eq!(n.strip_prefix(&"b.3".into()), Some(&[4u32][..]));
        assert_eq!(n.strip_prefix(&"c".into()), None);
    }
}
