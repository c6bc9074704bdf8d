import type { DrawCmd, Scene } from "./scene.js";

/** World-to-screen mapping; y flips so the math plane reads upright. */
export interface ViewTransform {
  scale: number;
  offsetX: number;
  offsetY: number;
  height: number;
}

export function fitView(
  terminals: [number, number][],
  width: number,
  height: number,
  margin = 40,
): ViewTransform {
  if (terminals.length === 0) {
    return { scale: 1, offsetX: margin, offsetY: margin, height };
  }
  const xs = terminals.map((t) => t[0]);
  const ys = terminals.map((t) => t[1]);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = Math.max(maxX - minX, 1e-9);
  const spanY = Math.max(maxY - minY, 1e-9);
  const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  return {
    scale,
    offsetX: margin - minX * scale,
    offsetY: margin - minY * scale,
    height,
  };
}

export function toScreen(view: ViewTransform, x: number, y: number): [number, number] {
  return [x * view.scale + view.offsetX, view.height - (y * view.scale + view.offsetY)];
}

export function fromScreen(view: ViewTransform, sx: number, sy: number): [number, number] {
  return [(sx - view.offsetX) / view.scale, (view.height - sy - view.offsetY) / view.scale];
}

/** Index of the terminal within pickRadius of a screen point, or null. */
export function pickTerminal(
  terminals: [number, number][],
  view: ViewTransform,
  sx: number,
  sy: number,
  pickRadius = 10,
): number | null {
  let best: number | null = null;
  let bestDist = pickRadius;
  terminals.forEach(([x, y], i) => {
    const [tx, ty] = toScreen(view, x, y);
    const d = Math.hypot(tx - sx, ty - sy);
    if (d <= bestDist) {
      best = i;
      bestDist = d;
    }
  });
  return best;
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  scene: Scene,
  view: ViewTransform,
  width: number,
): void {
  ctx.clearRect(0, 0, width, view.height);
  for (const cmd of scene.commands) {
    drawCommand(ctx, cmd, view);
  }
}

function drawCommand(ctx: CanvasRenderingContext2D, cmd: DrawCmd, view: ViewTransform): void {
  switch (cmd.type) {
    case "polyline": {
      ctx.strokeStyle = cmd.color;
      ctx.lineWidth = cmd.width;
      ctx.setLineDash(cmd.dotted ? [4, 4] : []);
      ctx.beginPath();
      cmd.points.forEach(([x, y], i) => {
        const [sx, sy] = toScreen(view, x, y);
        if (i === 0) ctx.moveTo(sx, sy);
        else ctx.lineTo(sx, sy);
      });
      if (cmd.closed) ctx.closePath();
      ctx.stroke();
      ctx.setLineDash([]);
      break;
    }
    case "circle": {
      const [sx, sy] = toScreen(view, cmd.x, cmd.y);
      ctx.beginPath();
      ctx.arc(sx, sy, cmd.radius, 0, 2 * Math.PI);
      if (cmd.filled) {
        ctx.fillStyle = cmd.color;
        ctx.fill();
      } else {
        ctx.strokeStyle = cmd.color;
        ctx.stroke();
      }
      if (cmd.label) {
        ctx.fillStyle = "#333333";
        ctx.font = "10px sans-serif";
        ctx.fillText(cmd.label, sx + 6, sy - 6);
      }
      break;
    }
    case "text": {
      const [sx, sy] = toScreen(view, cmd.x, cmd.y);
      ctx.fillStyle = cmd.color;
      ctx.font = "12px monospace";
      ctx.fillText(cmd.text, sx + 8, sy + 12);
      break;
    }
    case "arrow": {
      const [fx, fy] = toScreen(view, cmd.from[0], cmd.from[1]);
      const [tx, ty] = toScreen(view, cmd.to[0], cmd.to[1]);
      const mx = (fx + tx) / 2;
      const my = (fy + ty) / 2;
      const angle = Math.atan2(ty - fy, tx - fx);
      ctx.strokeStyle = cmd.color;
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(mx, my);
      ctx.lineTo(mx - 10 * Math.cos(angle - 0.4), my - 10 * Math.sin(angle - 0.4));
      ctx.moveTo(mx, my);
      ctx.lineTo(mx - 10 * Math.cos(angle + 0.4), my - 10 * Math.sin(angle + 0.4));
      ctx.stroke();
      break;
    }
  }
}
