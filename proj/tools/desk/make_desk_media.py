#!/usr/bin/env python3
"""Build the local source material for the desk corpus.

  make_desk_media.py text  --out DIR [--mb 1400]
  make_desk_media.py media --out DIR [--labels png,jpeg,...] [--mb 200]

`text` concatenates local text files (sources, headers, docs) into ~1 MiB
documents used as plaintext for enc/zip/gzip/bz2/xz/rar. `media` synthesizes
files for the ingest labels into DIR/<label>/. Everything is seeded.
"""

import argparse
import io
import os
import random
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

TEXT_ROOTS = [
    "/usr/local/lib/python3.10",
    "/usr/lib/python3.10",
    "/usr/include",
    "/usr/lib/node_modules",
    "/opt",
    "/usr/share",
    "/usr/local/share",
    "/usr/src",
]
TEXT_EXT = {".py", ".pyi", ".js", ".ts", ".h", ".hpp", ".c", ".cc", ".cpp", ".rs",
            ".txt", ".rst", ".md", ".html", ".tex", ".xml"}
MEDIA_LABELS = ["png", "jpeg", "mp3", "pdf", "office", "h264", "h265", "mpeg2", "mpeg4", "vp8"]
MB = 1 << 20


def log(msg):
    print(msg, file=sys.stderr, flush=True)


# ---------------------------------------------------------------- text

def text_files(roots):
    for root in roots:
        if not os.path.isdir(root):
            continue
        for dirpath, dirnames, filenames in os.walk(root):
            dirnames.sort()
            for name in sorted(filenames):
                p = Path(dirpath) / name
                if p.suffix.lower() not in TEXT_EXT or p.is_symlink():
                    continue
                try:
                    size = p.stat().st_size
                except OSError:
                    continue
                if 2048 <= size <= 8 * MB:
                    yield p


def readable_text(data):
    if b"\0" in data[:4096]:
        return False
    lines = data.count(b"\n") + 1
    return len(data) / lines < 400  # drop minified bundles


def make_text(out, target_mb, seed):
    rng = random.Random(seed)
    out.mkdir(parents=True, exist_ok=True)
    seen = set()
    doc, doc_size, docs, total = [], 0, 0, 0
    want = rng.randint(256 * 1024, 2 * MB)
    for p in text_files(TEXT_ROOTS):
        try:
            data = p.read_bytes()
        except OSError:
            continue
        if not readable_text(data) or hash(data) in seen:
            continue
        seen.add(hash(data))
        doc.append(data)
        doc_size += len(data)
        if doc_size >= want:
            (out / f"doc{docs:05d}.txt").write_bytes(b"\n".join(doc))
            docs += 1
            total += doc_size
            doc, doc_size = [], 0
            want = rng.randint(256 * 1024, 2 * MB)
            if total >= target_mb * MB:
                break
    if doc:
        (out / f"doc{docs:05d}.txt").write_bytes(b"\n".join(doc))
        total += doc_size
        docs += 1
    log(f"text: {docs} documents, {total / MB:.0f} MiB")


# ---------------------------------------------------------------- images

def photo_pool():
    from PIL import Image
    import skimage
    import sklearn.datasets
    import matplotlib

    dirs = [Path(skimage.__file__).parent / "data",
            Path(sklearn.datasets.__file__).parent / "images",
            Path(matplotlib.__file__).parent / "mpl-data" / "sample_data"]
    photos = []
    for d in dirs:
        for p in sorted(d.glob("*")):
            if p.suffix.lower() not in {".png", ".jpg", ".jpeg"}:
                continue
            try:
                im = Image.open(p).convert("RGB")
            except Exception:
                continue
            if min(im.size) >= 128:
                photos.append(im)
    return photos


def fractal_noise(rng, h, w):
    out = np.zeros((h, w))
    amp = 1.0
    for octave in range(1, 8):
        gh, gw = max(2, h >> (8 - octave)), max(2, w >> (8 - octave))
        grid = rng.random((gh, gw))
        from PIL import Image
        layer = np.asarray(Image.fromarray((grid * 255).astype(np.uint8)).resize((w, h), Image.BICUBIC), dtype=float)
        out += amp * layer
        amp *= 0.55
    out -= out.min()
    return out / max(out.max(), 1e-9)


def synthetic_image(rng, prng):
    from PIL import Image, ImageDraw, ImageFilter
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    w, h = prng.choice([(640, 480), (800, 600), (1024, 768), (1280, 720), (512, 512), (1600, 900)])
    kind = prng.choice(["terrain", "chart", "shapes", "textpage"])
    if kind == "terrain":
        n = fractal_noise(rng, h, w)
        cmap = matplotlib.colormaps[prng.choice(["terrain", "viridis", "gist_earth", "magma", "cubehelix"])]
        arr = (cmap(n)[:, :, :3] * 255).astype(np.uint8)
        return Image.fromarray(arr)
    if kind == "chart":
        fig, ax = plt.subplots(figsize=(w / 100, h / 100), dpi=100)
        for _ in range(prng.randint(1, 5)):
            x = np.arange(prng.randint(20, 400))
            y = np.cumsum(rng.normal(size=x.size))
            if prng.random() < 0.3:
                ax.bar(x[:30], np.abs(y[:30]))
            else:
                ax.plot(x, y, lw=prng.choice([0.8, 1.5, 2.5]))
        ax.set_title(f"series {prng.randint(1, 999)}")
        ax.grid(prng.random() < 0.5)
        buf = io.BytesIO()
        fig.savefig(buf, format="png")
        plt.close(fig)
        buf.seek(0)
        return Image.open(buf).convert("RGB")
    if kind == "shapes":
        im = Image.new("RGB", (w, h), tuple(prng.randrange(256) for _ in range(3)))
        d = ImageDraw.Draw(im)
        for _ in range(prng.randint(10, 200)):
            x0, y0 = prng.randrange(w), prng.randrange(h)
            box = [x0, y0, x0 + prng.randrange(5, w // 2), y0 + prng.randrange(5, h // 2)]
            col = tuple(prng.randrange(256) for _ in range(3))
            prng.choice([d.rectangle, d.ellipse])(box, fill=col)
        if prng.random() < 0.5:
            im = im.filter(ImageFilter.GaussianBlur(prng.uniform(0.5, 3)))
        return im
    im = Image.new("L", (w, h), 255)
    d = ImageDraw.Draw(im)
    y = 10
    while y < h - 12:
        words = " ".join(prng.choice(["data", "fragment", "cipher", "the", "archive", "report", "value", "table",
                                      "of", "and", "with", "figure", "section", "result"])
                         for _ in range(prng.randint(5, 14)))
        d.text((10, y), words, fill=prng.randint(0, 80))
        y += prng.randint(12, 20)
    arr = np.asarray(im, dtype=float) + rng.normal(0, prng.uniform(0, 8), (h, w))
    return Image.fromarray(np.clip(arr, 0, 255).astype(np.uint8)).convert("RGB")


def photo_variant(photos, rng, prng):
    from PIL import Image, ImageEnhance, ImageFilter, ImageOps

    im = prng.choice(photos)
    cw = prng.randint(min(128, im.width), im.width)
    ch = prng.randint(min(128, im.height), im.height)
    x, y = prng.randint(0, im.width - cw), prng.randint(0, im.height - ch)
    im = im.crop((x, y, x + cw, y + ch))
    scale = prng.uniform(0.6, 3.0)
    im = im.resize((max(64, int(cw * scale)), max(64, int(ch * scale))), Image.LANCZOS)
    if prng.random() < 0.5:
        im = ImageOps.mirror(im)
    if prng.random() < 0.3:
        im = im.rotate(prng.uniform(-20, 20), resample=Image.BICUBIC, expand=True)
    im = ImageEnhance.Color(im).enhance(prng.uniform(0.5, 1.6))
    im = ImageEnhance.Brightness(im).enhance(prng.uniform(0.7, 1.3))
    if prng.random() < 0.3:
        im = im.filter(ImageFilter.GaussianBlur(prng.uniform(0.3, 2)))
    if prng.random() < 0.3:
        other = prng.choice(photos).resize(im.size)
        im = Image.blend(im, other, prng.uniform(0.2, 0.5))
    if prng.random() < 0.5:
        arr = np.asarray(im, dtype=float) + rng.normal(0, prng.uniform(1, 6), (im.height, im.width, 3))
        im = Image.fromarray(np.clip(arr, 0, 255).astype(np.uint8))
    return im


def random_image(photos, rng, prng, photo_share):
    return photo_variant(photos, rng, prng) if prng.random() < photo_share else synthetic_image(rng, prng)


def save_png(im, prng):
    buf = io.BytesIO()
    mode = prng.random()
    if mode < 0.15:
        im = im.convert("P", palette=1, colors=prng.choice([16, 64, 256]))
    elif mode < 0.25:
        im = im.convert("L")
    elif mode < 0.35:
        im = im.convert("RGBA")
    im.save(buf, format="PNG", compress_level=prng.randint(6, 9), optimize=prng.random() < 0.2)
    return buf.getvalue()


def save_jpeg(im, prng):
    buf = io.BytesIO()
    im.convert("RGB").save(buf, format="JPEG", quality=prng.randint(60, 95), subsampling=prng.choice([0, 1, 2]),
                           progressive=prng.random() < 0.3, optimize=prng.random() < 0.5)
    return buf.getvalue()


def fill(out_dir, target, ext, produce):
    out_dir.mkdir(parents=True, exist_ok=True)
    total, i = sum(p.stat().st_size for p in out_dir.glob("*")), len(list(out_dir.glob("*")))
    while total < target:
        data = produce(i)
        name_ext = ext
        if isinstance(data, tuple):
            data, name_ext = data
        if data:
            (out_dir / f"{i:05d}.{name_ext}").write_bytes(data)
            total += len(data)
        i += 1
    return i


# ---------------------------------------------------------------- audio

def synth_track(rng, prng, seconds, rate=44100):
    n = int(seconds * rate)
    t = np.arange(n) / rate
    left, right = np.zeros(n), np.zeros(n)
    bpm = prng.uniform(70, 160)
    beat = 60.0 / bpm
    root = prng.uniform(40, 60)
    scale = [0, 2, 3, 5, 7, 8, 10] if prng.random() < 0.5 else [0, 2, 4, 5, 7, 9, 11]

    def note_freq(step, octave):
        return 440.0 * 2 ** ((root + 12 * octave + scale[step % 7] + 12 * (step // 7) - 69) / 12)

    for voice in range(prng.randint(2, 4)):
        octave = voice
        harmonics = [1.0] + [prng.uniform(0, 0.6) / k for k in range(2, 7)]
        pan = prng.uniform(0.2, 0.8)
        pos = 0.0
        while pos < seconds:
            dur = beat * prng.choice([0.5, 1, 1, 2, 4])
            s, e = int(pos * rate), min(n, int((pos + dur) * rate))
            if e <= s:
                break
            f = note_freq(prng.randrange(14), octave)
            tt = t[s:e] - pos
            env = np.minimum(1, tt / 0.01) * np.exp(-tt * prng.uniform(1, 5))
            tone = sum(a * np.sin(2 * np.pi * f * (k + 1) * tt + prng.random() * 6.28) for k, a in enumerate(harmonics))
            sig = 0.15 * env * tone
            left[s:e] += sig * (1 - pan)
            right[s:e] += sig * pan
            pos += dur
    # Drums: kick (decaying low sine) and noisy hats.
    k = 0
    while k * beat < seconds:
        s = int(k * beat * rate)
        e = min(n, s + int(0.25 * rate))
        tt = t[s:e] - k * beat
        kick = 0.5 * np.sin(2 * np.pi * 55 * tt * np.exp(-tt * 8)) * np.exp(-tt * 12)
        left[s:e] += kick
        right[s:e] += kick
        hs, he = int((k + 0.5) * beat * rate), min(n, int((k + 0.5) * beat * rate) + int(0.05 * rate))
        if hs < n:
            hat = 0.08 * rng.normal(size=he - hs) * np.exp(-np.arange(he - hs) / (0.01 * rate))
            left[hs:he] += hat
            right[hs:he] += hat * 0.8
        k += 1
    noise = prng.uniform(0.001, 0.01)
    left += noise * rng.normal(size=n)
    right += noise * rng.normal(size=n)
    peak = max(np.abs(left).max(), np.abs(right).max(), 1e-9)
    stereo = np.stack([left, right], axis=1) / peak * 0.9
    return (stereo * 32767).astype("<i2").tobytes()


def make_mp3(ffmpeg, rng, prng, tmp):
    pcm = synth_track(rng, prng, prng.uniform(60, 240))
    if prng.random() < 0.6:
        quality = ["-b:a", f"{prng.choice([128, 160, 192, 256, 320])}k"]
    else:
        quality = ["-q:a", str(prng.randint(0, 5))]
    out = tmp / "t.mp3"
    subprocess.run([ffmpeg, "-y", "-loglevel", "error", "-f", "s16le", "-ar", "44100", "-ac", "2", "-i", "-",
                    "-c:a", "libmp3lame", *quality, "-metadata", f"title=track {prng.randint(1, 9999)}",
                    "-metadata", "artist=desk", str(out)], input=pcm, check=True)
    return out.read_bytes()


# ---------------------------------------------------------------- video

VIDEO = {
    "h264": ("mp4", lambda p: ["-c:v", "libx264", "-preset", p.choice(["veryfast", "fast", "medium"]),
                               "-crf", str(p.randint(18, 28)), "-maxrate", "8M", "-bufsize", "16M", "-pix_fmt", "yuv420p"]),
    "h265": ("mp4", lambda p: ["-c:v", "libx265", "-preset", p.choice(["ultrafast", "veryfast", "fast"]),
                               "-crf", str(p.randint(20, 30)), "-pix_fmt", "yuv420p",
                               "-x265-params", "log-level=error:vbv-maxrate=8000:vbv-bufsize=16000"]),
    "mpeg2": ("mpg", lambda p: ["-c:v", "mpeg2video", "-q:v", str(p.randint(3, 9)), "-g", "15", "-maxrate", "9M", "-bufsize", "4M"]),
    "mpeg4": ("avi", lambda p: ["-c:v", "mpeg4", "-q:v", str(p.randint(3, 9)), "-vtag", "xvid", "-maxrate", "8M", "-bufsize", "8M"]),
    "vp8": ("webm", lambda p: ["-c:v", "libvpx", "-b:v", f"{p.choice([1, 2, 3, 4])}M", "-deadline", "good",
                               "-cpu-used", "5", "-auto-alt-ref", "0"]),
}


def make_video(ffmpeg, label, photos, rng, prng, tmp):
    ext, codec_args = VIDEO[label]
    w, h = prng.choice([(640, 360), (854, 480), (720, 576), (960, 540)])
    fps = prng.choice([24, 25, 30])
    seconds = prng.uniform(6, 15)
    frames = int(seconds * fps)
    noise = f"noise=alls={prng.randint(1, 8)}:allf=t"
    src = prng.choice(["photo", "photo", "mandelbrot", "life", "testsrc2", "cellauto"])
    inputs = []
    if src == "photo":
        img = tmp / "frame.png"
        photo_variant(photos, rng, prng).resize((w * 2, h * 2)).save(img)
        inputs = ["-loop", "1", "-framerate", str(fps), "-i", str(img)]
        zoom = prng.uniform(0.0005, 0.003)
        vf = (f"zoompan=z='min(zoom+{zoom:.4f},1.8)':x='iw/2-(iw/zoom/2)+{prng.randint(-40, 40)}*sin(on/50)'"
              f":y='ih/2-(ih/zoom/2)':d={frames}:s={w}x{h}:fps={fps},{noise}")
    else:
        extra = {"mandelbrot": "", "life": ":mold=10:r=25:ratio=0.1:death_color=#C83232:life_color=#00ff00",
                 "testsrc2": "", "cellauto": ":rule=110"}[src]
        inputs = ["-f", "lavfi", "-i", f"{src}=s={w}x{h}:r={fps}{extra}"]
        vf = f"eq=saturation={prng.uniform(0.6, 1.4):.2f},{noise}"
        if src in ("life", "cellauto"):
            vf = f"gblur=sigma={prng.uniform(0.5, 3):.1f}," + vf
    out = tmp / f"v.{ext}"
    subprocess.run([ffmpeg, "-y", "-loglevel", "error", *inputs, "-vf", vf, "-frames:v", str(frames),
                    *codec_args(prng), str(out)], check=True)
    return out.read_bytes()


# ---------------------------------------------------------------- documents

def text_chunk(text_docs, prng, n):
    p = prng.choice(text_docs)
    data = p.read_bytes()
    start = prng.randrange(max(1, len(data) - n))
    return data[start:start + n].decode("utf-8", "replace")


def paragraphs(text, max_len=900):
    out = []
    for block in text.replace("\r", "").split("\n\n"):
        block = " ".join(block.split())
        if block:
            out.append(block[:max_len])
    return out or ["(empty)"]


def make_pdf(photos, text_docs, rng, prng):
    from reportlab.lib.pagesizes import A4, letter
    from reportlab.lib.utils import ImageReader
    from reportlab import rl_config
    from reportlab.pdfgen import canvas

    # Binary streams as most PDF writers emit them; reportlab defaults to ASCII85.
    rl_config.useA85 = 0
    buf = io.BytesIO()
    size = prng.choice([A4, letter])
    c = canvas.Canvas(buf, pagesize=size, pageCompression=1 if prng.random() < 0.9 else 0)
    c.setTitle(f"report {prng.randint(1, 9999)}")
    for _ in range(prng.randint(2, 30)):
        y = size[1] - 60
        c.setFont(prng.choice(["Helvetica", "Times-Roman", "Courier"]), prng.choice([9, 10, 11, 12]))
        if prng.random() < 0.4:
            im = random_image(photos, rng, prng, 0.7)
            im.thumbnail((prng.randint(300, 1400), prng.randint(300, 1400)))
            data = io.BytesIO()
            if prng.random() < 0.7:
                im.convert("RGB").save(data, format="JPEG", quality=prng.randint(60, 92))
            else:
                im.save(data, format="PNG")
            data.seek(0)
            ih = min(size[1] / 2, im.height * (size[0] - 100) / im.width)
            c.drawImage(ImageReader(data), 50, y - ih, width=size[0] - 100, height=ih)
            y -= ih + 20
        for para in paragraphs(text_chunk(text_docs, prng, 6000)):
            for k in range(0, len(para), 95):
                if y < 50:
                    break
                c.drawString(50, y, para[k:k + 95])
                y -= 13
            y -= 6
            if y < 50:
                break
        c.showPage()
    c.save()
    return buf.getvalue()


def image_stream(photos, rng, prng):
    im = random_image(photos, rng, prng, 0.7)
    im.thumbnail((prng.randint(400, 1600), prng.randint(400, 1600)))
    data = io.BytesIO()
    if prng.random() < 0.6:
        im.convert("RGB").save(data, format="JPEG", quality=prng.randint(70, 92))
    else:
        im.save(data, format="PNG")
    data.seek(0)
    return data


def make_office(photos, text_docs, rng, prng):
    kind = prng.choices(["docx", "pptx", "xlsx"], weights=[4.5, 1.7, 1.8])[0]
    buf = io.BytesIO()
    if kind == "docx":
        import docx
        from docx.shared import Inches
        d = docx.Document()
        d.add_heading(f"Document {prng.randint(1, 9999)}", 0)
        for _ in range(prng.randint(1, 8)):
            for para in paragraphs(text_chunk(text_docs, prng, 8000))[:40]:
                d.add_paragraph(para)
            if prng.random() < 0.6:
                d.add_picture(image_stream(photos, rng, prng), width=Inches(prng.uniform(2, 6)))
            if prng.random() < 0.3:
                rows, cols = prng.randint(3, 20), prng.randint(2, 6)
                t = d.add_table(rows=rows, cols=cols)
                for r in range(rows):
                    for col in range(cols):
                        t.cell(r, col).text = str(round(prng.gauss(100, 40), 2))
        d.save(buf)
    elif kind == "pptx":
        from pptx import Presentation
        from pptx.util import Inches
        p = Presentation()
        for _ in range(prng.randint(3, 20)):
            s = p.slides.add_slide(p.slide_layouts[prng.choice([1, 5, 6])])
            if s.shapes.title is not None:
                s.shapes.title.text = paragraphs(text_chunk(text_docs, prng, 300))[0][:60]
            if prng.random() < 0.7:
                s.shapes.add_picture(image_stream(photos, rng, prng), Inches(1), Inches(1.5), width=Inches(prng.uniform(3, 8)))
            else:
                box = s.shapes.add_textbox(Inches(1), Inches(1.5), Inches(8), Inches(5))
                box.text_frame.text = "\n".join(paragraphs(text_chunk(text_docs, prng, 1500))[:8])
        p.save(buf)
    else:
        import openpyxl
        wb = openpyxl.Workbook()
        for sheet in range(prng.randint(1, 4)):
            ws = wb.active if sheet == 0 else wb.create_sheet()
            cols = prng.randint(4, 20)
            ws.append([f"col{c}" for c in range(cols)])
            for r in range(prng.randint(200, 6000)):
                row = []
                for c in range(cols):
                    v = prng.random()
                    row.append(round(prng.gauss(1000, 300), 3) if v < 0.6 else
                               prng.randint(0, 100000) if v < 0.85 else
                               prng.choice(["north", "south", "east", "west", "pending", "done", "n/a"]))
                ws.append(row)
        wb.save(buf)
    return buf.getvalue(), kind


# ---------------------------------------------------------------- main

def make_media(out, labels, target_mb, seed, text_dir):
    import imageio_ffmpeg

    ffmpeg = imageio_ffmpeg.get_ffmpeg_exe()
    photos = photo_pool()
    text_docs = sorted(Path(text_dir).glob("*.txt")) if text_dir else []
    target = target_mb * MB
    with tempfile.TemporaryDirectory() as t:
        tmp = Path(t)
        for label in labels:
            lseed = seed * 1000 + MEDIA_LABELS.index(label)
            rng, prng = np.random.default_rng(lseed), random.Random(lseed)
            d = out / label
            if label == "png":
                n = fill(d, target, "png", lambda i: save_png(random_image(photos, rng, prng, 0.5), prng))
            elif label == "jpeg":
                n = fill(d, target, "jpg", lambda i: save_jpeg(random_image(photos, rng, prng, 0.8), prng))
            elif label == "mp3":
                n = fill(d, target, "mp3", lambda i: make_mp3(ffmpeg, rng, prng, tmp))
            elif label == "pdf":
                if not text_docs:
                    sys.exit("pdf needs --text-dir")
                n = fill(d, target, "pdf", lambda i: make_pdf(photos, text_docs, rng, prng))
            elif label == "office":
                if not text_docs:
                    sys.exit("office needs --text-dir")
                n = fill(d, target, "bin", lambda i: make_office(photos, text_docs, rng, prng))
            else:
                ext = VIDEO[label][0]
                n = fill(d, target, ext, lambda i: make_video(ffmpeg, label, photos, rng, prng, tmp))
            log(f"{label}: {n} files in {d}")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("what", choices=["text", "media"])
    ap.add_argument("--out", required=True, type=Path)
    ap.add_argument("--mb", type=int, default=None, help="target MiB per label (media) or in total (text)")
    ap.add_argument("--labels", default=",".join(MEDIA_LABELS))
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--text-dir", type=Path, help="documents from the text step (pdf/office body text)")
    a = ap.parse_args()
    if a.what == "text":
        make_text(a.out, a.mb or 1400, a.seed)
    else:
        labels = [l for l in a.labels.split(",") if l]
        for l in labels:
            if l not in MEDIA_LABELS:
                sys.exit(f"unknown media label {l}")
        make_media(a.out, labels, a.mb or 200, a.seed, a.text_dir)


if __name__ == "__main__":
    main()
