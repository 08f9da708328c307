/* tslint:disable */
/* eslint-disable */

/**
 * Closed-form decoherence factor on `[0, t_end]` (units of 1/ω) for each
 * amplitude in `alphas`, at bias flux `phi_e`.
 */
export function decoherence_curves(phi_e: number, alphas: Float64Array, t_end: number, n_points: number): Float64Array;

/**
 * Derived device numbers as `key = value unit` lines. Lengths in mm,
 * frequency in GHz, energies in µeV.
 */
export function device_report(radius_mm: number, length_mm: number, frequency_ghz: number, e_c_uev: number, e_j_uev: number, phi_e: number): string;

/**
 * Transfer probability over `[0, π/η]` at ω/η = 50: times, closed form,
 * then explicit evolution.
 */
export function transfer_curve(n_points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly decoherence_curves: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly device_report: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly transfer_curve: (a: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
