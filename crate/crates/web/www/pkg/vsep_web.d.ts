/* tslint:disable */
/* eslint-disable */

export function generatePoints(kind: string, n: number, seed: number): Float64Array;

export function greedy(coords: Float64Array, labels: Uint8Array): string;

export function labels(coords: Float64Array, mode: string, seed: number): Uint8Array;

export function localSearchDisks(disks: Float64Array, ell: number): string;

export function separate(coords: Float64Array, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly generatePoints: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly greedy: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly labels: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly localSearchDisks: (a: number, b: number, c: number) => [number, number, number, number];
    readonly separate: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
