"""Drive the REST service end to end, in process.

The same flow the web client uses: synthesize speech, generate a rough
sketch, refine with controls, and walk the project history.  Start a real
server with `sgt serve --ckpt <file> --port 8000 --data-dir runs/projects`.
"""
import tempfile

from fastapi.testclient import TestClient

from sgt.genmodel import ModelConfig
from sgt.motionlib import MotionLibrary
from sgt.service import create_app
from sgt.training import TrainConfig, make_synthetic_corpus, train

corpus = make_synthetic_corpus(24, seed=5)
config = TrainConfig(
    epochs=4,
    seed=5,
    extractor_epochs=4,
    model=ModelConfig(audio_channels=16, word_hidden=16, decoder_hidden=64, critic_channels=32),
)
model, _ = train(corpus, config)

with tempfile.TemporaryDirectory() as data_dir:
    app = create_app(model=model, data_dir=data_dir, library=MotionLibrary.default(model.skeleton))
    client = TestClient(app)

    speech = client.post("/api/speech", json={"text": "hello and welcome to the show"}).json()
    print("speech:", speech["n_frames"], "frames,", len(speech["timings"]), "words")

    sketch = client.post("/api/generate", json={"audio_id": speech["audio_id"], "mode": "model"}).json()
    print("rough sketch:", len(sketch["frames"]), "frames; style track attached:", len(sketch["style_track"]))

    project = client.post("/api/projects", json={"name": "walkthrough", "text": "hello and welcome to the show"}).json()
    pid = project["id"]

    gesture = client.get("/api/motion-library/point_right", params={"speed": 2}).json()
    controls = {
        "pose_controls": [{"start": 6, "frames": gesture["frames"]}],
        "style_controls": [{"start": 0, "end": speech["n_frames"], "speed": 1.5}],
    }
    client.put(f"/api/projects/{pid}", json={"controls": controls})
    refined = client.post(
        "/api/generate", json={"audio_id": speech["audio_id"], "controls": controls, "mode": "model"}
    ).json()
    print("refined generation:", len(refined["frames"]), "frames")

    undone = client.post(f"/api/projects/{pid}/undo").json()
    print("after undo the project controls are empty again:", undone["controls"])
