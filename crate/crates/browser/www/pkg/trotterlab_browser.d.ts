/* tslint:disable */
/* eslint-disable */

/**
 * One disordered trajectory.
 */
export class LocalizationRun {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `IPR_η`; empty for controlled-Rx runs.
     */
    readonly ipr: Float64Array;
    /**
     * Row-major `steps × qubits` occupation probabilities.
     */
    readonly occupations: Float64Array;
    readonly qubits: number;
    readonly steps: number;
    readonly tail: Float64Array;
    readonly zAngles: Float64Array;
}

export function continuousCurve(n: number, j1: number, j2: number, v2: number, t: number, lo: number, hi: number, count: number): Float64Array;

export function discreteCurve(n: number, n_steps: number, theta1: number, theta2: number, alpha: number, count: number): Float64Array;

export function localizationRun(n: number, n_steps: number, theta: number, phi: number, radius: number, seed: bigint, crx: boolean): LocalizationRun;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_localizationrun_free: (a: number, b: number) => void;
    readonly continuousCurve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly discreteCurve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly localizationRun: (a: number, b: number, c: number, d: number, e: number, f: bigint, g: number) => [number, number, number];
    readonly localizationrun_ipr: (a: number) => [number, number];
    readonly localizationrun_occupations: (a: number) => [number, number];
    readonly localizationrun_qubits: (a: number) => number;
    readonly localizationrun_steps: (a: number) => number;
    readonly localizationrun_tail: (a: number) => [number, number];
    readonly localizationrun_zAngles: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
