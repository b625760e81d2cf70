#![allow(dead_code)]

use nijenhuis_core::acstructure::{AlmostComplexStructure, ComplexFrameSpec};
use nijenhuis_core::expr::{rat, Chart, Rational};
use nijenhuis_core::VectorField;

pub fn field(ch: &Chart, c: [&str; 4]) -> VectorField {
    VectorField::new(c.map(|s| ch.parse(s).unwrap()))
}

pub fn origin() -> [Rational; 4] {
    [rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1)]
}

pub struct KimLee {
    pub chart: Chart,
    pub spec: ComplexFrameSpec,
    pub j: AlmostComplexStructure,
    pub v: [VectorField; 4],
}

/// Real parts in the order (x1, y1, x2, y2).
pub fn kim_lee() -> KimLee {
    let ch = Chart::new(&["x1", "y1", "x2", "y2"], &[]).unwrap();
    let spec = ComplexFrameSpec {
        z1: (field(&ch, ["1/2", "0", "-x1", "y1"]), field(&ch, ["0", "-1/2", "y1", "x1"])),
        z2: (field(&ch, ["0", "0", "0", "-1"]), field(&ch, ["2*y1", "0", "-(4*x1*y1 + 1)", "0"])),
    };
    let j = AlmostComplexStructure::from_complex_frame(&spec).unwrap();
    let v = [
        field(&ch, ["0", "0", "0", "-2"]),
        field(&ch, ["1", "0", "-2*x1", "-2*y1"]),
        field(&ch, ["-2*(x1^2 + y1^2 + x2)", "1", "4*(x1^2 + y1^2 + x2)*x1 - 2*y1", "2*x1 + 4*(x1^2 + y1^2 + x2)*y1"]),
        field(&ch, ["0", "0", "2", "0"]),
    ];
    KimLee { chart: ch, spec, j, v }
}

pub struct A32Example {
    pub chart: Chart,
    pub j: AlmostComplexStructure,
    pub e: [VectorField; 4],
    pub w: [VectorField; 4],
}

pub fn a32_example() -> A32Example {
    let ch = Chart::new(&["x1", "x2", "x3", "x4"], &[]).unwrap();
    let spec = ComplexFrameSpec {
        z1: (field(&ch, ["1", "0", "0", "0"]), field(&ch, ["-x1 - x2", "-x2", "-1", "-1"])),
        z2: (field(&ch, ["0", "1", "0", "0"]), field(&ch, ["-(x1 + x2)", "-x2", "-1", "0"])),
    };
    let j = AlmostComplexStructure::from_complex_frame(&spec).unwrap();
    let e = [
        field(&ch, ["1", "0", "0", "0"]),
        field(&ch, ["0", "1", "0", "0"]),
        field(&ch, ["x1 + x2", "x2", "1", "0"]),
        field(&ch, ["0", "0", "0", "1"]),
    ];
    let w = [
        field(&ch, ["exp(x3)", "0", "0", "0"]),
        field(&ch, ["x3*exp(x3)", "exp(x3)", "0", "0"]),
        field(&ch, ["0", "0", "1", "0"]),
        field(&ch, ["0", "0", "0", "-1"]),
    ];
    A32Example { chart: ch, j, e, w }
}
