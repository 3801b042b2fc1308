// DOM bootstrap: wires the store to the canvas widgets. All service state
// flows through EditorStore; this file only translates events.

import { ApiClient, fetchTransport } from "./api.js";
import { EditorStore, STYLE_PRESETS } from "./editorState.js";
import { Camera, defaultCamera, dragJoint, drawPose, pickJoint } from "./poseEditor.js";
import { Schema } from "./schema.js";
import { BONES, Pose } from "./skeleton.js";
import { barAt, drawTimeline, poseBars, rowOfY, styleBars, TimelineLayout, xToFrame } from "./timeline.js";
import { STYLE_ELEMENTS, StyleElement } from "./types.js";

async function boot(): Promise<void> {
  const api = new ApiClient(fetchTransport());
  const schema = (await api.controlsSchema()) as Schema;
  const store = new EditorStore(api, schema);

  const timelineCanvas = document.getElementById("timeline") as HTMLCanvasElement;
  const viewportCanvas = document.getElementById("viewport") as HTMLCanvasElement;
  const tctx = timelineCanvas.getContext("2d")!;
  const vctx = viewportCanvas.getContext("2d")!;
  const layout: TimelineLayout = { pxPerFrame: 8, leftPad: 10 };
  const camera: Camera = defaultCamera(viewportCanvas.width, viewportCanvas.height);

  let editedPose: Pose | null = null;
  let draggedJoint: number | null = null;
  let draggedBar: { kind: "pose" | "style"; index: number; grabOffset: number } | null = null;
  let playing = false;

  const currentPose = (): Pose | null => {
    if (editedPose) return editedPose;
    if (!store.motion) return null;
    const frame = Math.min(store.playhead, store.motion.frames.length - 1);
    return store.motion.frames[frame] as Pose;
  };

  function render(): void {
    timelineCanvas.width = Math.max(640, store.nFrames * layout.pxPerFrame + 20);
    drawTimeline(tctx, timelineCanvas.width, store, layout);
    vctx.fillStyle = "#181c20";
    vctx.fillRect(0, 0, viewportCanvas.width, viewportCanvas.height);
    const pose = currentPose();
    if (pose) {
      drawPose(vctx, pose, camera, BONES, { highlight: draggedJoint, color: editedPose ? "#fc6" : "#3cc" });
    }
    const style = store.motion?.style_track;
    if (style) {
      const row = style[Math.min(store.playhead, style.length - 1)];
      (document.getElementById("style-readout") as HTMLElement).textContent = STYLE_ELEMENTS.map(
        (name, i) => `${name} ${row[i].toFixed(2)}`,
      ).join("  ");
    }
    (document.getElementById("busy") as HTMLElement).textContent = store.busy ? "generating…" : "";
  }
  store.subscribe(render);

  // --- timeline interactions: click selects a frame, drag selects a range,
  // bars in the pose/style rows are draggable along the timeline
  let downFrame: number | null = null;
  timelineCanvas.addEventListener("mousedown", (ev) => {
    const frame = xToFrame(ev.offsetX, layout, store.nFrames);
    const row = rowOfY(ev.offsetY);
    if (row === "pose" || row === "style") {
      const bars = row === "pose" ? poseBars(store.controls) : styleBars(store.controls);
      const index = barAt(bars, ev.offsetX, layout);
      if (index !== null) {
        const bar = bars.find((b) => b.index === index)!;
        draggedBar = { kind: row, index, grabOffset: frame - bar.startFrame };
        return;
      }
    }
    downFrame = frame;
    store.selectFrame(frame);
  });
  timelineCanvas.addEventListener("mousemove", (ev) => {
    const frame = xToFrame(ev.offsetX, layout, store.nFrames);
    if (draggedBar) {
      const start = frame - draggedBar.grabOffset;
      if (draggedBar.kind === "pose") store.movePoseControl(draggedBar.index, start);
      else store.moveStyleControl(draggedBar.index, start);
    } else if (downFrame !== null && frame !== downFrame) {
      store.selectRange(downFrame, frame);
    }
  });
  window.addEventListener("mouseup", () => {
    downFrame = null;
    draggedBar = null;
  });

  // --- pose editor: drag joints with fixed bone lengths; orbit with shift
  viewportCanvas.addEventListener("mousedown", (ev) => {
    const pose = currentPose();
    if (!pose) return;
    draggedJoint = pickJoint(pose, ev.offsetX, ev.offsetY, camera);
    if (draggedJoint !== null) {
      editedPose = pose.map((j) => [...j]) as Pose;
      render();
    }
  });
  viewportCanvas.addEventListener("mousemove", (ev) => {
    if (ev.shiftKey && ev.buttons) {
      camera.yaw += ev.movementX * 0.01;
      camera.pitch += ev.movementY * 0.01;
      render();
      return;
    }
    if (draggedJoint !== null && editedPose) {
      editedPose = dragJoint(editedPose, draggedJoint, ev.offsetX, ev.offsetY, camera);
      render();
    }
  });
  window.addEventListener("mouseup", () => {
    draggedJoint = null;
    render();
  });

  (document.getElementById("apply-pose") as HTMLButtonElement).onclick = () => {
    if (!editedPose || !store.selection) return;
    store.addPoseControl(store.selection.start, [editedPose.map((j) => [...j])] as number[][][]);
    editedPose = null;
  };
  (document.getElementById("clear-pose") as HTMLButtonElement).onclick = () => {
    editedPose = null;
    render();
  };

  // --- speech, generation, history
  (document.getElementById("speech-form") as HTMLFormElement).onsubmit = async (ev) => {
    ev.preventDefault();
    const text = (document.getElementById("speech-text") as HTMLInputElement).value;
    await store.loadSpeech(text);
  };
  (document.getElementById("regenerate") as HTMLButtonElement).onclick = () => void store.regenerate();
  (document.getElementById("undo") as HTMLButtonElement).onclick = () => void store.undo();
  (document.getElementById("redo") as HTMLButtonElement).onclick = () => void store.redo();
  (document.getElementById("mode") as HTMLSelectElement).onchange = (ev) => {
    store.mode = (ev.target as HTMLSelectElement).value as "model" | "keyframe";
  };
  window.addEventListener("keydown", (ev) => {
    if ((ev.ctrlKey || ev.metaKey) && ev.key === "z" && !ev.shiftKey) void store.undo();
    if ((ev.ctrlKey || ev.metaKey) && (ev.key === "y" || (ev.key === "z" && ev.shiftKey))) void store.redo();
  });

  // --- style sliders (step 0.1; touching one activates its mask) + presets
  for (const element of STYLE_ELEMENTS) {
    const slider = document.getElementById(`style-${element}`) as HTMLInputElement;
    slider.oninput = () => store.setStyle(element as StyleElement, parseFloat(slider.value));
  }
  for (const preset of Object.keys(STYLE_PRESETS)) {
    (document.getElementById(`preset-${preset}`) as HTMLButtonElement).onclick = () => store.applyPreset(preset);
  }

  // --- motion library browser
  const libraryList = document.getElementById("library") as HTMLSelectElement;
  const { gestures } = await api.listGestures();
  for (const g of gestures) {
    const option = document.createElement("option");
    option.value = g.id;
    option.textContent = `${g.name} (${g.tags.join(",")})`;
    libraryList.appendChild(option);
  }
  (document.getElementById("insert-gesture") as HTMLButtonElement).onclick = async () => {
    if (!libraryList.value || !store.selection) return;
    const speed = parseInt((document.getElementById("gesture-speed") as HTMLSelectElement).value, 10);
    const flip = (document.getElementById("gesture-flip") as HTMLInputElement).checked;
    await store.addLibraryGesture(libraryList.value, speed, flip, store.selection.start);
  };

  // --- playback of the last service response
  (document.getElementById("play") as HTMLButtonElement).onclick = () => {
    playing = !playing;
  };
  setInterval(() => {
    if (playing && store.motion) {
      store.playhead = (store.playhead + 1) % store.motion.frames.length;
      render();
    }
  }, 1000 / 15);

  render();
}

boot().catch((err) => {
  document.body.insertAdjacentHTML("beforeend", `<pre class="error">${String(err)}</pre>`);
});
