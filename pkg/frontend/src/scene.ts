import type { SessionState } from "./types.js";

/**
 * Pure scene construction: turns a session state (plus the current
 * picks) into primitive draw commands and panel text, so rendering is
 * testable without a canvas. Colors follow the original tool: cyan
 * hull, dotted black residual polygon.
 */

export interface CircleCmd {
  type: "circle";
  x: number;
  y: number;
  radius: number;
  color: string;
  filled: boolean;
  label?: string;
}

export interface PolylineCmd {
  type: "polyline";
  points: [number, number][];
  color: string;
  width: number;
  dotted: boolean;
  closed: boolean;
}

export interface TextCmd {
  type: "text";
  x: number;
  y: number;
  text: string;
  color: string;
}

export interface ArrowCmd {
  type: "arrow";
  from: [number, number];
  to: [number, number];
  color: string;
}

export type DrawCmd = CircleCmd | PolylineCmd | TextCmd | ArrowCmd;

export interface LengthPanel {
  lprim: string;
  gpLower: string;
  ltree: string;
  verdict: string;
}

export interface Scene {
  commands: DrawCmd[];
  panel: LengthPanel;
}

export function formatLength(value: number): string {
  return value.toFixed(6);
}

export function buildLengthPanel(state: SessionState): LengthPanel {
  let verdict = "";
  if (state.phase === "done") {
    verdict =
      state.ltree > state.lprim
        ? "Ltree exceeds Lprim: a shorter tree exists"
        : "Ltree is within the spanning baseline";
  }
  return {
    lprim: formatLength(state.lprim),
    gpLower: formatLength(state.gp_lower),
    ltree: formatLength(state.ltree),
    verdict,
  };
}

export function buildScene(state: SessionState, picks: number[] = []): Scene {
  const cmds: DrawCmd[] = [];
  const pts = state.terminals;
  const omitted = new Set(state.omitted);
  const picked = new Set(picks);

  for (const [i, j] of state.prim_edges) {
    cmds.push({
      type: "polyline",
      points: [pts[i], pts[j]],
      color: "#bbbbbb",
      width: 1,
      dotted: false,
      closed: false,
    });
  }

  if (state.hull) {
    const hullPts = state.hull.vertices.map((v) => pts[v]);
    cmds.push({
      type: "polyline",
      points: hullPts,
      color: "cyan",
      width: 2,
      dotted: false,
      closed: true,
    });
    state.hull.vertices.forEach((v, k) => {
      cmds.push({
        type: "text",
        x: pts[v][0],
        y: pts[v][1],
        text: state.hull!.markers[k],
        color: "#0088aa",
      });
    });
    // counterclockwise direction cue along the first hull edge
    if (hullPts.length >= 2) {
      cmds.push({ type: "arrow", from: hullPts[0], to: hullPts[1], color: "cyan" });
    }
  }

  if (state.residual_hull.length >= 2) {
    cmds.push({
      type: "polyline",
      points: state.residual_hull.map((v) => pts[v]),
      color: "black",
      width: 1,
      dotted: true,
      closed: true,
    });
  }

  for (const sub of state.subtrees) {
    const resolve = (ref: ["t" | "s", number]): [number, number] =>
      ref[0] === "t" ? pts[ref[1]] : sub.steiner_points[ref[1]];
    for (const [a, b] of sub.edges) {
      cmds.push({
        type: "polyline",
        points: [resolve(a), resolve(b)],
        color: sub.valid ? "#cc3333" : "#886600",
        width: 2,
        dotted: false,
        closed: false,
      });
    }
    for (const [x, y] of sub.steiner_points) {
      cmds.push({ type: "circle", x, y, radius: 3, color: "#cc3333", filled: true });
    }
  }

  pts.forEach(([x, y], i) => {
    cmds.push({
      type: "circle",
      x,
      y,
      radius: 4,
      color: picked.has(i) ? "#ff9900" : omitted.has(i) ? "#999999" : "black",
      filled: !omitted.has(i),
      label: String(i),
    });
  });

  return { commands: cmds, panel: buildLengthPanel(state) };
}
