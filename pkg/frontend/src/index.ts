export { COLUMNS, SIGNATURE, parseResults } from "./csv.js";
export type { ColumnName, NumericColumn, ResultRow } from "./csv.js";
export { groupSeries, meanAndSem } from "./aggregate.js";
export type { SeriesOptions, SeriesPoint, Summary } from "./aggregate.js";
export { renderChart } from "./svg.js";
export type { ChartOptions } from "./svg.js";
