//! The bundled environment corpus: 12 maps of 5x5 and 12 of 10x10, committed
//! as text files under `maps/` and embedded here for use without path setup.

/// One bundled map: a stable id (the file stem) and its raw text.
#[derive(Clone, Copy, Debug)]
pub struct BundledMap {
    pub id: &'static str,
    pub text: &'static str,
}

macro_rules! bundled {
    ($($id:literal),+ $(,)?) => {
        &[$(BundledMap { id: $id, text: include_str!(concat!("../maps/", $id, ".txt")) }),+]
    };
}

/// All 24 bundled maps, 5x5 first, in id order.
pub fn bundled_maps() -> &'static [BundledMap] {
    bundled![
        "5x5_01", "5x5_02", "5x5_03", "5x5_04", "5x5_05", "5x5_06", "5x5_07", "5x5_08",
        "5x5_09", "5x5_10", "5x5_11", "5x5_12", "10x10_01", "10x10_02", "10x10_03", "10x10_04",
        "10x10_05", "10x10_06", "10x10_07", "10x10_08", "10x10_09", "10x10_10", "10x10_11",
        "10x10_12",
    ]
}
