//! Worked examples as marking grids, highest mark first.
//!
//! Each grid is parsed with [`MarkedPartition::parse_grid`], which re-marks
//! the parts and refuses any grid that is not the canonical marking.

use crate::error::{Error, Result};
use crate::partition::MarkedPartition;

/// Name, parameters `(k, r)` and grid.
const GRIDS: &[(&str, (usize, usize), &str)] = &[
    // a member of the strict family at (6,5) and of several others
    (
        "pi1",
        (4, 3),
        r"
        &&6&&&12&&16&&22&&&&&&38\\
        &2&6&&10&&14&&18&22&26&&32&&36&\\
        1&&6&9&&12&&16&&22&26&30&&34&&38",
    ),
    // a member of the equal family at (6,5)
    (
        "pi2",
        (4, 3),
        r"
        &&6&&&&12&&16&&&24&&&&&38\\
        &2&6&&10&&&14&&18&22&&&28&&34&38\\
        1&&6&9&&11&&14&&18&22&&26&&30&34&38",
    ),
    // all five reduction labels at once
    (
        "pi3",
        (4, 3),
        r"
        &6&&&12&&&&20&&26&&&34&&40\\
        &6&&10&&14&&18&&24&&28&32&&38&&42\\
        4&&8&&12&&16&&20&24&&28&32&&38&&42",
    ),
    // dilation of pi1 at (6,5), one grid per step
    (
        "dil4",
        (4, 3),
        r"
        &&6&&&12&&16&&&23&&&&&&38\\
        &2&6&&10&&14&&18&22&&26&&32&&36&\\
        1&&6&9&&12&&16&&22&&26&30&&34&&38",
    ),
    (
        "dil3",
        (4, 3),
        r"
        &&6&&&12&&16&&&24&&&&&&&38\\
        &2&6&&10&&14&&18&22&&&27&&32&&36&\\
        1&&6&9&&12&&16&&22&&26&&30&&34&&38",
    ),
    (
        "dil2",
        (4, 3),
        r"
        &&6&&&12&&16&&&24&&&&&&&38\\
        &2&6&&10&&14&&18&22&&&28&&\overline{33}&&36&\\
        1&&6&9&&12&&16&&22&&26&&30&&34&&38",
    ),
    (
        "dil1",
        (4, 3),
        r"
        &&6&&&12&&16&&&24&&&&&&&38\\
        &2&6&&10&&14&&18&22&&&28&&34&&\overline{37}&\\
        1&&6&9&&12&&16&&22&&26&&30&34&&&38",
    ),
    (
        "mu",
        (4, 3),
        r"
        &&6&&&12&&16&&&24&&&&&38\\
        &2&6&&10&&14&&18&22&&&28&&34&38\\
        1&&6&9&&12&&16&&22&&26&&30&34&38",
    ),
    (
        "m6",
        (4, 3),
        r"
        &&4&&8\\
        &2&&6&&10\\
        1&&4&&8",
    ),
    (
        "omega6",
        (4, 3),
        r"
        &&&4&&8\\
        &2&&&6&&10\\
        1&&3&&6&&10",
    ),
    (
        "m7",
        (4, 3),
        r"
        &&6&&&&14\\
        &&6&&10&&14\\
        1&4&&8&&12&&16",
    ),
    (
        "nu7",
        (4, 3),
        r"
        &&&6&&&&14\\
        &&4&&8&&12&&16\\
        1&3&&6&&10&&14&",
    ),
    (
        "omega7",
        (4, 3),
        r"
        &&&&8&&&14\\
        &&4&&8&&12&&16\\
        1&3&&6&&&12&&16",
    ),
    (
        "m8",
        (4, 3),
        r"
        &&&6&&10&&&16\\
        &2&&6&&10&&14\\
        1&&4&&8&&12&&16",
    ),
    (
        "omega8",
        (4, 3),
        r"
        &&&&6&&10&&&16\\
        &2&&5&&8&&12&&16\\
        1&&4&&&8&&12&&16",
    ),
    (
        "m9",
        (4, 3),
        r"
        &4&&&12\\
        2&&6&10\\
        2&&6&10",
    ),
    (
        "omega9",
        (4, 3),
        r"
        &&4&&&&12\\
        &2&&6&&10\\
        1&&4&&8&&12",
    ),
    (
        "m10",
        (4, 3),
        r"
        &4&&&12&\\
        2&&6&10&&\\
        2&&6&10&&14",
    ),
    (
        "omega10",
        (4, 3),
        r"
        &&4&&&&12&\\
        &2&&6&&10&&14\\
        1&&4&&8&&12&",
    ),
    (
        "m11",
        (4, 3),
        r"
        &4&&&12&&16&&\\
        2&&6&10&&&16&&20\\
        2&&6&10&&14&&18",
    ),
    (
        "omega11",
        (4, 3),
        r"
        &&4&&&&12&&16&&\\
        &2&&6&&10&&&16&&20\\
        1&&4&&8&&12&&16&&20",
    ),
    (
        "m12",
        (4, 3),
        r"
        &4&&&12&&16&&&&24\\
        2&&6&10&&&16&&20&&24&\\
        2&&6&10&&14&&18&&22&&26",
    ),
    (
        "nu12",
        (4, 3),
        r"
        &&4&&&&12&&16&&&&24\\
        &2&&6&&10&&14&&18&&22&&26\\
        1&&4&&8&&12&&16&&20&&24&",
    ),
    (
        "omega12",
        (4, 3),
        r"
        &&4&&&&12&&&18&&24\\
        &2&&6&&10&&14&&18&22&&26\\
        1&&4&&8&&12&&16&&22&&26",
    ),
];

/// Names of all stored examples.
pub fn names() -> Vec<&'static str> {
    GRIDS.iter().map(|g| g.0).collect()
}

/// The `(k, r)` an example is meant for.
pub fn params(name: &str) -> Option<(usize, usize)> {
    GRIDS.iter().find(|g| g.0 == name).map(|g| g.1)
}

/// Grid text of an example as stored.
pub fn grid_text(name: &str) -> Option<&'static str> {
    GRIDS.iter().find(|g| g.0 == name).map(|g| g.2)
}

pub fn get(name: &str) -> Result<MarkedPartition> {
    let text = grid_text(name).ok_or_else(|| Error::Parse(format!("unknown fixture {name:?}")))?;
    MarkedPartition::parse_grid(text)
}
