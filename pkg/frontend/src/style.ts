// Segment semiology: a diverging hue for the four uncertainty levels and
// dashing for inferred legs. Both views share this single mapping.

export const UNCERTAINTY_COLORS = {
  green: "#2e7d32",
  grey: "#757575",
  red: "#c62828",
  orange: "#ef6c00",
} as const;

export type ColorName = keyof typeof UNCERTAINTY_COLORS;

export const COLOR_BY_TRAVEL_UNCERTAINTY: Record<number, ColorName> = {
  0: "green",
  [-1]: "grey",
  [-2]: "red",
  [-3]: "orange",
};

export const DASH_INFERRED = "6 4";
export const DASH_DIRECT = "";

export interface SegmentStyle {
  colorName: ColorName;
  stroke: string;
  dash: string;
}

export function colorNameFor(travelUncertainty: number): ColorName {
  const name = COLOR_BY_TRAVEL_UNCERTAINTY[travelUncertainty];
  if (!name) {
    throw new Error(`no color for travel_uncertainty ${travelUncertainty}`);
  }
  return name;
}

export function dashFor(direct: boolean): string {
  return direct ? DASH_DIRECT : DASH_INFERRED;
}

export function segmentStyle(travelUncertainty: number,
                             direct: boolean): SegmentStyle {
  const colorName = colorNameFor(travelUncertainty);
  return {
    colorName,
    stroke: UNCERTAINTY_COLORS[colorName],
    dash: dashFor(direct),
  };
}
