// Fixed class colors, shared by markers, the overlay, and the legend.
// Keep in sync with the CLI report legend documented in the service README.

export const CLASS_COLORS: Record<number, string> = {
  0: "#1f77b4", // refugees: blue
  73: "#2ca02c", // humanitarian aid: green
  145: "#ff7f0e", // violent protests: orange
  194: "#d62728", // artillery fights: red
  202: "#9467bd", // mass killings: purple
};

export const FALLBACK_COLOR = "#555555";

export function colorFor(label: number): string {
  return CLASS_COLORS[label] ?? FALLBACK_COLOR;
}
