// Mouse strokes on the canvas become grid waypoints. The canvas is a fixed
// 640x480 surface mapping 1:1 onto the light grid, so conversion is just
// floor + clamp; the interesting part is deduplication and the 200-waypoint
// submission cap.

export const GRID_W = 640;
export const GRID_H = 480;
export const MAX_WAYPOINTS = 200;

export type Channel = "RED" | "BLUE";

export interface CanvasPoint {
  x: number;
  y: number;
}

export interface CanvasStroke {
  channel: Channel;
  points: CanvasPoint[];
}

export interface MappedStroke {
  channel: Channel;
  /** grid waypoints, deduplicated and capped, as [x, y] pairs */
  points: [number, number][];
  /** true when the stroke had to be cut down to MAX_WAYPOINTS */
  truncated: boolean;
  dropped: number;
}

const clamp = (v: number, lo: number, hi: number) => Math.min(Math.max(v, lo), hi);

export function toGrid(p: CanvasPoint): [number, number] {
  return [clamp(Math.floor(p.x), 0, GRID_W - 1), clamp(Math.floor(p.y), 0, GRID_H - 1)];
}

export function mapStroke(stroke: CanvasStroke): MappedStroke {
  const deduped: [number, number][] = [];
  for (const raw of stroke.points) {
    const cell = toGrid(raw);
    const last = deduped[deduped.length - 1];
    if (!last || last[0] !== cell[0] || last[1] !== cell[1]) {
      deduped.push(cell);
    }
  }
  const truncated = deduped.length > MAX_WAYPOINTS;
  const points = truncated ? deduped.slice(0, MAX_WAYPOINTS) : deduped;
  return {
    channel: stroke.channel,
    points,
    truncated,
    dropped: deduped.length - points.length,
  };
}
