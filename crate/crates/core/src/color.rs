//! Colors, the overview color scales, and luminance-based contrast marks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Color {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Color {
    pub const WHITE: Color = Color::rgb(0xff, 0xff, 0xff);
    pub const BLACK: Color = Color::rgb(0, 0, 0);
    pub const DARK_GRAY: Color = Color::rgb(0x33, 0x33, 0x33);
    pub const HIGHLIGHT: Color = Color::rgb(0xff, 0x7f, 0x0e);

    pub const fn rgb(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }

    pub fn lerp(self, other: Color, t: f64) -> Color {
        let t = t.clamp(0.0, 1.0);
        let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * t).round() as u8;
        Color::rgb(mix(self.r, other.r), mix(self.g, other.g), mix(self.b, other.b))
    }

    /// Relative luminance: BT.709 weights over linearized sRGB channels.
    pub fn luminance(self) -> f64 {
        fn linear(c: u8) -> f64 {
            let c = c as f64 / 255.0;
            if c <= 0.04045 {
                c / 12.92
            } else {
                ((c + 0.055) / 1.055).powf(2.4)
            }
        }
        0.2126 * linear(self.r) + 0.7152 * linear(self.g) + 0.0722 * linear(self.b)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }
}

impl FromStr for Color {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let hex = s.strip_prefix('#').ok_or_else(|| format!("bad color `{s}`"))?;
        if hex.len() != 6 {
            return Err(format!("bad color `{s}`"));
        }
        let part = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| format!("bad color `{s}`"));
        Ok(Color::rgb(part(0)?, part(2)?, part(4)?))
    }
}

impl Serialize for Color {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Color {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// White on dark backgrounds, dark gray on light ones.
pub fn contrast_color(background: Color) -> Color {
    if background.luminance() < 0.45 {
        Color::WHITE
    } else {
        Color::DARK_GRAY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorScheme {
    /// Blues for edge weight, red–yellow–green for similarity.
    #[default]
    Standard,
    /// Purples for edge weight, orange–purple for similarity.
    ColorblindSafe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleKind {
    SequentialEdgeWeight,
    DivergingSimilarity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColorScale {
    pub kind: ScaleKind,
    pub domain: (f64, f64),
    stops: Vec<Color>,
    pub missing_color: Color,
}

impl ColorScale {
    pub fn edge_weight(scheme: ColorScheme, max_weight: f64) -> Self {
        let stops = match scheme {
            ColorScheme::Standard => vec![Color::rgb(0xde, 0xeb, 0xf7), Color::rgb(0x08, 0x30, 0x6b)],
            ColorScheme::ColorblindSafe => vec![Color::rgb(0xef, 0xed, 0xf5), Color::rgb(0x3f, 0x00, 0x7d)],
        };
        Self {
            kind: ScaleKind::SequentialEdgeWeight,
            domain: (0.0, max_weight),
            stops,
            // absent edge
            missing_color: Color::WHITE,
        }
    }

    pub fn similarity(scheme: ColorScheme) -> Self {
        let stops = match scheme {
            ColorScheme::Standard => vec![
                Color::rgb(0xd7, 0x30, 0x27),
                Color::rgb(0xff, 0xff, 0xbf),
                Color::rgb(0x1a, 0x98, 0x50),
            ],
            ColorScheme::ColorblindSafe => vec![
                Color::rgb(0xe6, 0x61, 0x01),
                Color::rgb(0xf7, 0xf7, 0xf7),
                Color::rgb(0x5e, 0x3c, 0x99),
            ],
        };
        Self {
            kind: ScaleKind::DivergingSimilarity,
            domain: (0.0, 1.0),
            stops,
            missing_color: Color::rgb(0x9e, 0x9e, 0x9e),
        }
    }

    pub fn map(&self, v: Option<f64>) -> Color {
        let Some(v) = v else { return self.missing_color };
        let (lo, hi) = self.domain;
        let t = if hi > lo { ((v - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 1.0 };
        let segments = (self.stops.len() - 1) as f64;
        let pos = t * segments;
        let i = (pos.floor() as usize).min(self.stops.len() - 2);
        self.stops[i].lerp(self.stops[i + 1], pos - i as f64)
    }

    pub fn endpoints(&self) -> (Color, Color) {
        (self.stops[0], *self.stops.last().expect("scale has stops"))
    }
}

pub const DIAGONAL_COLOR: Color = Color::rgb(0xe0, 0xe0, 0xe0);

/// Categorical colors for the objects of a multi-object chart; the first
/// (row object) is red.
pub const OBJECT_PALETTE: [Color; 10] = [
    Color::rgb(0xe1, 0x57, 0x59),
    Color::rgb(0x4e, 0x79, 0xa7),
    Color::rgb(0x59, 0xa1, 0x4f),
    Color::rgb(0xf2, 0x8e, 0x2b),
    Color::rgb(0x76, 0xb7, 0xb2),
    Color::rgb(0xed, 0xc9, 0x48),
    Color::rgb(0xb0, 0x7a, 0xa1),
    Color::rgb(0xff, 0x9d, 0xa7),
    Color::rgb(0x9c, 0x75, 0x5f),
    Color::rgb(0xba, 0xb0, 0xac),
];
