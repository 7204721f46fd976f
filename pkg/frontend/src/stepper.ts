// Step-by-step walk over an itinerary's segments.

export type StepperMode = "wrap" | "disable";

export class Stepper {
  private index = 0;

  constructor(public readonly count: number,
              public readonly mode: StepperMode = "disable") {
    if (count < 0) throw new Error("segment count cannot be negative");
  }

  get current(): number {
    return this.index;
  }

  get canNext(): boolean {
    return this.count > 0 && (this.mode === "wrap" || this.index < this.count - 1);
  }

  get canPrev(): boolean {
    return this.count > 0 && (this.mode === "wrap" || this.index > 0);
  }

  next(): number {
    if (this.count === 0) return this.index;
    if (this.index >= this.count - 1) {
      if (this.mode === "wrap") this.index = 0;
      // "disable": stepping past the last segment is a no-op
    } else {
      this.index += 1;
    }
    return this.index;
  }

  prev(): number {
    if (this.count === 0) return this.index;
    if (this.index <= 0) {
      if (this.mode === "wrap") this.index = this.count - 1;
    } else {
      this.index -= 1;
    }
    return this.index;
  }

  goTo(i: number): number {
    if (this.count > 0) {
      this.index = Math.min(Math.max(i, 0), this.count - 1);
    }
    return this.index;
  }
}
