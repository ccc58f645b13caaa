/** A referenced CSV column is absent from the header. */
export class MissingColumn extends Error {
  constructor(column: string, available: string[]) {
    super(`missing column ${JSON.stringify(column)}; have ${available.join(", ")}`);
    this.name = "MissingColumn";
  }
}

/** A figure would contain no data points. */
export class EmptySeries extends Error {
  constructor(detail: string) {
    super(`no data to plot: ${detail}`);
    this.name = "EmptySeries";
  }
}
