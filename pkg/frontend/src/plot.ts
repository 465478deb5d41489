// Static orthographic 3D scatter with drag-rotate. The projection pipeline
// is pure so tests can assert on projected points; drawing degrades to a
// no-op where no 2D context exists (jsdom).

export interface ProjectedPoint {
  x: number;
  y: number;
  depth: number;
}

export class ScatterPlot {
  private points: [number, number, number][] = [];
  private yaw = 0.6;
  private pitch = 0.4;
  private dragging = false;
  private lastX = 0;
  private lastY = 0;
  private ctx: CanvasRenderingContext2D | null;

  constructor(private canvas: HTMLCanvasElement) {
    this.ctx = canvas.getContext ? canvas.getContext("2d") : null;
    canvas.addEventListener("mousedown", (e) => {
      this.dragging = true;
      this.lastX = e.clientX;
      this.lastY = e.clientY;
    });
    canvas.addEventListener("mousemove", (e) => {
      if (!this.dragging) return;
      this.rotateBy((e.clientX - this.lastX) * 0.01, (e.clientY - this.lastY) * 0.01);
      this.lastX = e.clientX;
      this.lastY = e.clientY;
    });
    for (const ev of ["mouseup", "mouseleave"] as const) {
      canvas.addEventListener(ev, () => {
        this.dragging = false;
      });
    }
  }

  get pointCount(): number {
    return this.points.length;
  }

  /** Load micro-sigma coordinates; recenters on the cluster's centroid. */
  setPointsMicro(coordsMicro: number[]): void {
    const pts: [number, number, number][] = [];
    for (let i = 0; i + 2 < coordsMicro.length; i += 3) {
      pts.push([coordsMicro[i] / 1e6, coordsMicro[i + 1] / 1e6, coordsMicro[i + 2] / 1e6]);
    }
    if (pts.length > 0) {
      const centroid = [0, 1, 2].map(
        (axis) => pts.reduce((sum, p) => sum + p[axis], 0) / pts.length,
      );
      this.points = pts.map((p) => [p[0] - centroid[0], p[1] - centroid[1], p[2] - centroid[2]]);
    } else {
      this.points = [];
    }
    this.draw();
  }

  clear(): void {
    this.points = [];
    this.draw();
  }

  rotateBy(dYaw: number, dPitch: number): void {
    this.yaw += dYaw;
    this.pitch = Math.max(-1.5, Math.min(1.5, this.pitch + dPitch));
    this.draw();
  }

  /** Orthographic projection of the current points at the current rotation. */
  project(): ProjectedPoint[] {
    const cy = Math.cos(this.yaw);
    const sy = Math.sin(this.yaw);
    const cp = Math.cos(this.pitch);
    const sp = Math.sin(this.pitch);
    const width = this.canvas.width || 360;
    const height = this.canvas.height || 360;
    const extent = Math.max(1e-9, ...this.points.map((p) => Math.hypot(p[0], p[1], p[2])));
    const scale = (Math.min(width, height) * 0.42) / extent;
    return this.points.map(([x, y, z]) => {
      const rx = cy * x + sy * z;
      const rz = -sy * x + cy * z;
      const ry = cp * y - sp * rz;
      const depth = sp * y + cp * rz;
      return { x: width / 2 + rx * scale, y: height / 2 - ry * scale, depth };
    });
  }

  draw(): void {
    if (!this.ctx) return;
    const { width, height } = this.canvas;
    this.ctx.clearRect(0, 0, width, height);
    this.ctx.fillStyle = "#10141c";
    this.ctx.fillRect(0, 0, width, height);
    const projected = this.project()
      .map((p, i) => ({ ...p, i }))
      .sort((a, b) => a.depth - b.depth);
    for (const point of projected) {
      const radius = 9 + 3 * Math.tanh(point.depth);
      const shade = Math.round(150 + 70 * Math.tanh(point.depth));
      this.ctx.beginPath();
      this.ctx.arc(point.x, point.y, radius, 0, Math.PI * 2);
      this.ctx.fillStyle = `rgb(${shade}, ${Math.round(shade * 0.75)}, 60)`;
      this.ctx.fill();
      this.ctx.strokeStyle = "#000";
      this.ctx.stroke();
    }
  }
}
