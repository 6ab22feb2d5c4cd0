// Drag payload encoding shared by the palette and the canvas. Kept as a
// tiny seam so tests can drive drop handlers without synthesizing real
// DataTransfer objects (which DOM test environments do not implement).

export type DragPayload =
  | { source: "palette"; kind: string }
  | { source: "grid"; id: string };

export function writePayload(dt: DataTransfer | null, payload: DragPayload): void {
  dt?.setData("text/plain", JSON.stringify(payload));
}

export function readPayload(text: string): DragPayload | null {
  try {
    const v = JSON.parse(text) as DragPayload;
    if (v && (v.source === "palette" || v.source === "grid")) return v;
  } catch {
    /* not ours */
  }
  return null;
}
