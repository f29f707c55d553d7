//! The Sioux Falls example network: 16 normal nodes, 8 charging stations and
//! 76 directed links with their length, travel-time and energy ranges.

type LinkRow = (&'static str, &'static str, f64, (u32, u32), (f64, f64));

/// `(from, to, length_km, (time_lo, time_hi), (energy_lo, energy_hi))`
pub(crate) const LINKS: [LinkRow; 76] = [
    ("1", "4", 12.0, (1, 4), (3.6, 5.04)),
    ("1", "CS1", 23.0, (2, 5), (2.64, 5.76)),
    ("2", "3", 10.0, (1, 2), (1.92, 4.56)),
    ("2", "CS1", 11.0, (2, 3), (2.4, 4.8)),
    ("2", "CS3", 17.0, (1, 3), (2.16, 4.32)),
    ("3", "2", 10.0, (2, 3), (3.12, 4.32)),
    ("3", "CS2", 10.0, (1, 4), (1.2, 4.32)),
    ("3", "CS4", 20.0, (2, 3), (1.44, 3.84)),
    ("4", "1", 12.0, (1, 2), (2.16, 3.6)),
    ("4", "6", 12.0, (1, 2), (3.12, 6.48)),
    ("4", "CS2", 10.0, (2, 4), (2.4, 5.28)),
    ("5", "6", 10.0, (1, 2), (2.4, 3.6)),
    ("5", "7", 12.0, (2, 3), (1.68, 3.6)),
    ("5", "CS2", 11.0, (1, 2), (2.88, 5.28)),
    ("6", "4", 12.0, (1, 2), (1.44, 5.04)),
    ("6", "5", 10.0, (1, 2), (2.16, 3.6)),
    ("6", "CS5", 11.0, (1, 3), (2.16, 5.28)),
    ("6", "CS6", 12.0, (1, 2), (3.6, 5.52)),
    ("7", "5", 12.0, (1, 2), (3.6, 5.52)),
    ("7", "9", 15.0, (1, 2), (2.64, 6.24)),
    ("7", "CS4", 10.0, (2, 5), (1.92, 4.32)),
    ("7", "CS5", 11.0, (1, 3), (2.4, 4.32)),
    ("7", "CS7", 18.0, (2, 4), (3.36, 5.52)),
    ("8", "16", 30.0, (1, 2), (2.4, 3.84)),
    ("8", "CS5", 10.0, (2, 4), (3.12, 4.8)),
    ("8", "CS6", 12.0, (2, 5), (3.36, 4.8)),
    ("9", "7", 15.0, (1, 2), (2.16, 4.8)),
    ("9", "11", 10.0, (1, 2), (2.16, 5.04)),
    ("9", "CS5", 11.0, (2, 3), (1.2, 4.32)),
    ("10", "12", 11.0, (1, 2), (1.44, 4.08)),
    ("10", "CS4", 14.0, (1, 2), (2.64, 5.52)),
    ("10", "CS7", 12.0, (2, 4), (2.64, 4.56)),
    ("11", "9", 10.0, (1, 2), (2.16, 3.6)),
    ("11", "16", 16.0, (1, 2), (1.44, 3.36)),
    ("11", "CS7", 12.0, (2, 4), (1.2, 4.56)),
    ("12", "10", 11.0, (2, 3), (2.16, 4.8)),
    ("12", "13", 12.0, (1, 2), (2.4, 4.8)),
    ("12", "CS8", 10.0, (1, 4), (1.92, 4.8)),
    ("13", "12", 12.0, (1, 2), (2.64, 4.56)),
    ("13", "15", 10.0, (2, 3), (1.68, 4.56)),
    ("13", "16", 16.0, (1, 2), (1.44, 5.04)),
    ("13", "CS7", 11.0, (1, 3), (3.36, 5.04)),
    ("14", "CS3", 22.0, (2, 4), (3.12, 5.04)),
    ("14", "CS8", 12.0, (2, 3), (2.88, 6.24)),
    ("15", "13", 10.0, (2, 3), (1.92, 5.28)),
    ("15", "16", 10.0, (1, 2), (2.16, 5.28)),
    ("15", "CS8", 11.0, (2, 5), (1.2, 4.56)),
    ("16", "8", 30.0, (1, 3), (2.4, 4.08)),
    ("16", "11", 16.0, (1, 2), (2.4, 6.0)),
    ("16", "13", 16.0, (1, 3), (3.36, 6.72)),
    ("16", "15", 10.0, (2, 3), (3.6, 6.96)),
    ("CS1", "1", 23.0, (1, 2), (2.16, 5.28)),
    ("CS1", "2", 11.0, (1, 3), (1.68, 4.08)),
    ("CS2", "3", 10.0, (1, 2), (3.6, 6.96)),
    ("CS2", "4", 10.0, (2, 4), (2.88, 6.48)),
    ("CS2", "5", 11.0, (1, 3), (3.6, 4.8)),
    ("CS3", "2", 17.0, (1, 2), (2.88, 6.0)),
    ("CS3", "14", 22.0, (1, 2), (2.16, 4.8)),
    ("CS3", "CS4", 12.0, (1, 3), (2.88, 5.28)),
    ("CS4", "3", 20.0, (1, 2), (1.2, 4.8)),
    ("CS4", "7", 10.0, (1, 3), (2.64, 6.0)),
    ("CS4", "10", 14.0, (1, 3), (3.12, 6.72)),
    ("CS4", "CS3", 12.0, (1, 2), (2.88, 4.8)),
    ("CS5", "6", 11.0, (1, 2), (1.2, 3.12)),
    ("CS5", "7", 11.0, (1, 2), (1.44, 3.36)),
    ("CS5", "8", 10.0, (1, 2), (3.12, 5.04)),
    ("CS5", "9", 11.0, (1, 2), (2.4, 5.04)),
    ("CS6", "6", 12.0, (1, 3), (2.16, 4.08)),
    ("CS6", "8", 12.0, (2, 3), (1.92, 5.52)),
    ("CS7", "7", 18.0, (1, 3), (1.68, 4.56)),
    ("CS7", "10", 12.0, (1, 3), (3.6, 6.72)),
    ("CS7", "11", 12.0, (1, 2), (2.16, 3.84)),
    ("CS7", "13", 11.0, (1, 2), (1.44, 2.88)),
    ("CS8", "12", 10.0, (2, 3), (2.4, 3.6)),
    ("CS8", "14", 12.0, (1, 2), (1.2, 3.84)),
    ("CS8", "15", 11.0, (1, 2), (2.64, 5.28)),
];

/// Per-slot departure probability of each charging station.
pub(crate) const DEPARTURE_PROB: [(&str, f64); 8] = [
    ("CS1", 0.74),
    ("CS2", 0.84),
    ("CS3", 0.94),
    ("CS4", 0.90),
    ("CS5", 0.78),
    ("CS6", 0.87),
    ("CS7", 0.94),
    ("CS8", 0.90),
];

/// Per-slot request probability of each normal node.
pub(crate) const REQUEST_PROB: [(&str, f64); 16] = [
    ("1", 0.31),
    ("2", 0.62),
    ("3", 0.32),
    ("4", 0.69),
    ("5", 0.20),
    ("6", 0.13),
    ("7", 0.50),
    ("8", 0.25),
    ("9", 0.18),
    ("10", 0.27),
    ("11", 0.15),
    ("12", 0.26),
    ("13", 0.57),
    ("14", 0.35),
    ("15", 0.52),
    ("16", 0.67),
];

pub(crate) const REQUEST_ENERGY_KWH: (f64, f64) = (7.2, 16.8);
