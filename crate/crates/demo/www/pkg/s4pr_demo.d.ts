/* tslint:disable */
/* eslint-disable */

/**
 * Token game under the multi-model controller.
 */
export class Session {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Random controllable firings; successive calls use successive seeds.
     */
    auto(count: number): number;
    fail(): boolean;
    fire(transition: string): boolean;
    constructor();
    repair(): boolean;
    state(): string;
}

export function reachability(p12_units: number): string;

/**
 * `a_max`/`b_max` of 0 mean the default enumeration bounds.
 */
export function synthesize(threshold: boolean, a_max: number, b_max: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_session_free: (a: number, b: number) => void;
    readonly reachability: (a: number) => [number, number, number, number];
    readonly session_auto: (a: number, b: number) => number;
    readonly session_fail: (a: number) => number;
    readonly session_fire: (a: number, b: number, c: number) => [number, number, number];
    readonly session_new: () => number;
    readonly session_repair: (a: number) => number;
    readonly session_state: (a: number) => [number, number];
    readonly synthesize: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
