/** Wire types mirroring the session service documents. */

export type EdgeRef = ["t" | "s", number];

export interface Subtree {
  kind: "full" | "fermat" | "polygonal";
  terminal_indices: number[];
  terminals: [number, number][];
  steiner_points: [number, number][];
  edges: [EdgeRef, EdgeRef][];
  length: number;
  valid: boolean;
}

export interface HullInfo {
  vertices: number[];
  interior: number[];
  markers: string;
}

export type Phase = "drawing" | "retouch" | "done";

export interface SessionState {
  format_version: number;
  kind: "session";
  phase: Phase;
  terminals: [number, number][];
  prim_edges: [number, number][];
  lprim: number;
  gp_lower: number;
  gp_upper: number;
  ltree: number;
  hull: HullInfo | null;
  residual_hull: number[];
  omitted: number[];
  connected_components: number[][];
  subtrees: Subtree[];
  undo_depth: number;
}

export interface Report {
  action: string;
  committed: boolean;
  rejected: string | null;
  lprim: number;
  gp_lower: number;
  gp_upper: number;
  ltree: number;
  phase: string;
  residual_hull: number[];
  messages: string[];
  subtree_length: number | null;
}

export type ActionRequest =
  | { kind: "omit_points"; indices: number[] }
  | { kind: "full_stretch"; first: number; last: number }
  | { kind: "full_tree_all" }
  | { kind: "fermat_join"; refs: [number, number, number] }
  | { kind: "polygonal_edge"; refs: number[] }
  | { kind: "undo" }
  | { kind: "finish" };

export interface ActionResponse {
  session_id: string;
  state: SessionState;
  report: Report;
}

export interface ApiError {
  error: string;
  detail: string;
}
