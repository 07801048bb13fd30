/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_localizationrun_free: (a: number, b: number) => void;
export const continuousCurve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
export const discreteCurve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const localizationRun: (a: number, b: number, c: number, d: number, e: number, f: bigint, g: number) => [number, number, number];
export const localizationrun_ipr: (a: number) => [number, number];
export const localizationrun_occupations: (a: number) => [number, number];
export const localizationrun_qubits: (a: number) => number;
export const localizationrun_steps: (a: number) => number;
export const localizationrun_tail: (a: number) => [number, number];
export const localizationrun_zAngles: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
