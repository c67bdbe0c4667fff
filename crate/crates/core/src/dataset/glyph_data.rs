//! Embedded 28x28 monospace digit bitmaps, one per class.
//!
//! `#` is a lit pixel, `.` is background.

pub(crate) const GLYPH_ROWS: [[&str; 28]; 10] = [
    // 0
    [
        "............................",
        "............................",
        "............................",
        "............................",
        "...........#####............",
        "..........########..........",
        ".........##########.........",
        ".........####..####.........",
        "........####....###.........",
        "........####....####........",
        "........###.....####........",
        "........###.....####........",
        "........###..##.####........",
        "........###.###.####........",
        "........###..##.####........",
        "........###.....####........",
        "........###.....####........",
        "........####....####........",
        "........####....###.........",
        ".........####..####.........",
        ".........##########.........",
        "..........########..........",
        "...........#####............",
        "............................",
        "............................",
        "............................",
        "............................",
        "............................",
    ],
    // 1
    [
        "............................",
        "............................",
        "............................",
        "............................",
        "...........#####............",
        ".........#######............",
        ".........#######............",
        ".........##..###............",
        ".............###............",
        ".............###............",
        ".............###............",
        ".............###............",
        ".............###............",
        ".............###............",
        ".............###............",
        ".............###............",
        ".............###............",
        ".............###............",
        ".............###............",
        ".............###............",
        "........############........",
        "........############........",
        "........############........",
        "............................",
        "............................",
        "............................",
        "............................",
        "............................",
    ],
    // 2
    [
        "............................",
        "............................",
        "............................",
        "............................",
        "..........######............",
        "........##########..........",
        "........###########.........",
        "........##.....####.........",
        "...............####.........",
        "................###.........",
        "................###.........",
        "...............####.........",
        "..............####..........",
        "..............####..........",
        ".............####...........",
        "............####............",
        "...........####.............",
        "..........####..............",
        ".........####...............",
        "........####................",
        ".......#############........",
        ".......#############........",
        ".......#############........",
        "............................",
        "............................",
        "............................",
        "............................",
        "............................",
    ],
    // 3
    [
        "............................",
        "............................",
        "............................",
        "............................",
        "..........######............",
        "........##########..........",
        "........###########.........",
        "........##.....####.........",
        "................###.........",
        "................###.........",
        "...............####.........",
        "...........#######..........",
        "...........######...........",
        "...........#######..........",
        "...............####.........",
        "................####........",
        "................####........",
        "................####........",
        "................####........",
        "........#......#####........",
        "........###########.........",
        "........##########..........",
        ".........#######............",
        "............................",
        "............................",
        "............................",
        "............................",
        "............................",
    ],
    // 4
    [
        "............................",
        "............................",
        "............................",
        "............................",
        "..............####..........",
        "..............####..........",
        ".............#####..........",
        "............######..........",
        "............######..........",
        "...........###.###..........",
        "..........###..###..........",
        "..........###..###..........",
        ".........###...###..........",
        "........####...###..........",
        "........###....###..........",
        ".......###.....###..........",
        ".......#############........",
        ".......#############........",
        ".......#############........",
        "...............###..........",
        "...............###..........",
        "...............###..........",
        "...............###..........",
        "............................",
        "............................",
        "............................",
        "............................",
        "............................",
    ],
    // 5
    [
        "............................",
        "............................",
        "............................",
        "............................",
        "........###########.........",
        "........###########.........",
        "........###########.........",
        "........###.................",
        "........###.................",
        "........###.................",
        "........###.................",
        "........########............",
        "........##########..........",
        "........###########.........",
        ".........#.....####.........",
        "................####........",
        "................####........",
        "................####........",
        "................####........",
        "........#......####.........",
        "........###########.........",
        "........##########..........",
        ".........#######............",
        "............................",
        "............................",
        "............................",
        "............................",
        "............................",
    ],
    // 6
    [
        "............................",
        "............................",
        "............................",
        "............................",
        "............######..........",
        "...........########.........",
        "..........#########.........",
        ".........####.....#.........",
        "........####................",
        "........####................",
        "........###..####...........",
        "........###########.........",
        "........###########.........",
        "........#####...####........",
        "........####....####........",
        "........####.....###........",
        "........####.....###........",
        "........####.....###........",
        "........####....####........",
        ".........####...####........",
        ".........##########.........",
        "..........########..........",
        "...........######...........",
        "............................",
        "............................",
        "............................",
        "............................",
        "............................",
    ],
    // 7
    [
        "............................",
        "............................",
        "............................",
        "............................",
        "........############........",
        "........############........",
        "........############........",
        "...............####.........",
        "...............####.........",
        "...............####.........",
        "..............####..........",
        "..............####..........",
        "..............###...........",
        ".............####...........",
        ".............####...........",
        "............####............",
        "............####............",
        "............###.............",
        "...........####.............",
        "...........####.............",
        "..........####..............",
        "..........####..............",
        "..........###...............",
        "............................",
        "............................",
        "............................",
        "............................",
        "............................",
    ],
    // 8
    [
        "............................",
        "............................",
        "............................",
        "............................",
        "...........######...........",
        "..........########..........",
        ".........##########.........",
        "........####...####.........",
        "........####....###.........",
        "........###.....####........",
        "........####....###.........",
        ".........###...####.........",
        "..........########..........",
        "...........######...........",
        ".........##########.........",
        "........####....###.........",
        "........###.....####........",
        "........###......###........",
        "........###.....####........",
        "........####....####........",
        "........###########.........",
        ".........##########.........",
        "...........######...........",
        "............................",
        "............................",
        "............................",
        "............................",
        "............................",
    ],
    // 9
    [
        "............................",
        "............................",
        "............................",
        "............................",
        "...........#####............",
        ".........#########..........",
        "........###########.........",
        "........####...####.........",
        "........###.....###.........",
        ".......####.....####........",
        ".......####.....####........",
        ".......####.....####........",
        "........###.....####........",
        "........####...#####........",
        "........############........",
        ".........###########........",
        "..........#####.####........",
        "................####........",
        "................###.........",
        ".........#....#####.........",
        ".........#########..........",
        ".........########...........",
        "..........#####.............",
        "............................",
        "............................",
        "............................",
        "............................",
        "............................",
    ],
];
