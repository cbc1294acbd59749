// Pinned figure style: every rendered byte is a function of the input CSV
// and these constants, nothing else.

export const WIDTH = 640;
export const HEIGHT = 400;
export const MARGIN = { top: 24, right: 24, bottom: 46, left: 58 };

export const PALETTE = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
];

export const FONT_FAMILY = "Helvetica, Arial, sans-serif";
export const FONT_SIZE = 11;
export const STROKE_WIDTH = 1.8;
export const DASH = "6 4"; // no-adversary series are drawn dashed
export const AXIS_COLOR = "#333333";
export const GRID_COLOR = "#dddddd";
export const MARKER_RADIUS = 2.6;
export const BAR_FILL_RATIO = 0.6;
