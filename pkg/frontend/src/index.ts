export * from "./csv.js";
export * from "./svg.js";
export * from "./figures.js";
