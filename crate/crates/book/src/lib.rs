//! The guide under `book/src`, one module per chapter, so that
//! `cargo test` runs every Rust sample in it.

macro_rules! chapters {
    ($($module:ident => $file:literal),* $(,)?) => {
        $(
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            pub mod $module {}
        )*

        /// Chapter files compiled here, in order.
        pub const CHAPTERS: &[&str] = &[$($file),*];
    };
}

chapters! {
    introduction => "introduction.md",
    evaluation => "evaluation.md",
    critical_points => "critical-points.md",
    dynamics => "dynamics.md",
    transfer => "transfer.md",
    rendering => "rendering.md",
    farey => "farey.md",
    service => "service.md",
}
