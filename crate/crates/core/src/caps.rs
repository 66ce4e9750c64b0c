/// Desk-scale guards. `DWSURGERY_GROUP_CAP` and `DWSURGERY_ENUM_CAP` override
/// the defaults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub group_order: usize,
    pub enumeration: u128,
}

pub const DEFAULT_GROUP_CAP: usize = 64;
pub const DEFAULT_ENUM_CAP: u128 = 1 << 26;

impl Default for Caps {
    fn default() -> Self {
        Caps { group_order: DEFAULT_GROUP_CAP, enumeration: DEFAULT_ENUM_CAP }
    }
}

impl Caps {
    pub fn current() -> Self {
        let mut c = Caps::default();
        if let Some(v) = std::env::var("DWSURGERY_GROUP_CAP").ok().and_then(|s| s.parse().ok()) {
            c.group_order = v;
        }
        if let Some(v) = std::env::var("DWSURGERY_ENUM_CAP").ok().and_then(|s| s.parse().ok()) {
            c.enumeration = v;
        }
        c
    }
}
