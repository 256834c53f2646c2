// QR matrix encoder: byte mode, error-correction level L, versions 1-18,
// mask pattern 0. Version 18 holds 718 bytes, enough for a login payload
// carrying a 2048-bit server public key. Display-only by design: the
// copyable payload text next to the image is the canonical ingestion path
// for the authenticator, so no decoder ships here. Larger payloads raise
// QrCapacityError and the page falls back to text-only display.

export class QrCapacityError extends Error {}

export const MAX_VERSION = 18

// per-version tables for level L, index 0 unused; data capacity is
// derived from the module-count formula and cross-checked in tests
// against the published byte capacities.
const ECC_PER_BLOCK = [0, 7, 10, 15, 20, 26, 18, 20, 24, 30, 18, 20, 24, 26, 30, 22, 24, 28, 30]
const NUM_BLOCKS = [0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 4, 4, 4, 4, 4, 6, 6, 6, 6]
const ALIGNMENT_CENTERS: Record<number, number[]> = {
  2: [6, 18], 3: [6, 22], 4: [6, 26], 5: [6, 30], 6: [6, 34],
  7: [6, 22, 38], 8: [6, 24, 42], 9: [6, 26, 46], 10: [6, 28, 50],
  11: [6, 30, 54], 12: [6, 32, 58], 13: [6, 34, 62], 14: [6, 26, 46, 66],
  15: [6, 26, 48, 70], 16: [6, 26, 50, 74], 17: [6, 30, 54, 78],
  18: [6, 30, 56, 82],
}

export function rawDataModules(version: number): number {
  let result = (16 * version + 128) * version + 64
  if (version >= 2) {
    const numAlign = Math.floor(version / 7) + 2
    result -= (25 * numAlign - 10) * numAlign - 55
    if (version >= 7) {
      result -= 36
    }
  }
  return result
}

export function totalCodewords(version: number): number {
  return Math.floor(rawDataModules(version) / 8)
}

export function dataCodewords(version: number): number {
  return totalCodewords(version) - ECC_PER_BLOCK[version] * NUM_BLOCKS[version]
}

export function byteCapacity(version: number): number {
  const countBits = version <= 9 ? 8 : 16
  return Math.floor((dataCodewords(version) * 8 - 4 - countBits) / 8)
}

// ---------------------------------------------------------------------------
// GF(256) arithmetic and Reed-Solomon over the QR polynomial 0x11d

const GF_EXP = new Uint8Array(512)
const GF_LOG = new Uint8Array(256)
;(() => {
  let value = 1
  for (let i = 0; i < 255; i++) {
    GF_EXP[i] = value
    GF_LOG[value] = i
    value <<= 1
    if (value & 0x100) {
      value ^= 0x11d
    }
  }
  for (let i = 255; i < 512; i++) {
    GF_EXP[i] = GF_EXP[i - 255]
  }
})()

export function gfMul(a: number, b: number): number {
  if (a === 0 || b === 0) {
    return 0
  }
  return GF_EXP[GF_LOG[a] + GF_LOG[b]]
}

export function gfPow(base: number, exponent: number): number {
  let acc = 1
  for (let i = 0; i < exponent; i++) {
    acc = gfMul(acc, base)
  }
  return acc
}

function generatorPoly(degree: number): Uint8Array {
  // coefficients low degree first during the build
  let poly = Uint8Array.of(1)
  for (let i = 0; i < degree; i++) {
    const next = new Uint8Array(poly.length + 1)
    for (let j = 0; j < poly.length; j++) {
      next[j] ^= gfMul(poly[j], GF_EXP[i])
      next[j + 1] ^= poly[j]
    }
    poly = next
  }
  return poly.reverse()
}

export function rsEncode(data: Uint8Array, eccLen: number): Uint8Array {
  const generator = generatorPoly(eccLen)
  const remainder = new Uint8Array(eccLen)
  for (const byte of data) {
    const factor = byte ^ remainder[0]
    remainder.copyWithin(0, 1)
    remainder[eccLen - 1] = 0
    for (let i = 0; i < eccLen; i++) {
      remainder[i] ^= gfMul(generator[i + 1], factor)
    }
  }
  return remainder
}

// ---------------------------------------------------------------------------
// bit assembly and block interleaving

function buildCodewords(payload: Uint8Array, version: number): Uint8Array {
  const dataLen = dataCodewords(version)
  const bits: number[] = []
  const pushBits = (value: number, count: number) => {
    for (let i = count - 1; i >= 0; i--) {
      bits.push((value >> i) & 1)
    }
  }
  pushBits(0b0100, 4) // byte mode
  pushBits(payload.length, version <= 9 ? 8 : 16)
  for (const byte of payload) {
    pushBits(byte, 8)
  }
  pushBits(0, Math.min(4, dataLen * 8 - bits.length)) // terminator
  while (bits.length % 8 !== 0) {
    bits.push(0)
  }
  const data = new Uint8Array(dataLen)
  for (let i = 0; i < bits.length; i += 8) {
    let byte = 0
    for (let j = 0; j < 8; j++) {
      byte = (byte << 1) | bits[i + j]
    }
    data[i / 8] = byte
  }
  const PAD = [0xec, 0x11]
  for (let i = bits.length / 8; i < dataLen; i++) {
    data[i] = PAD[(i - bits.length / 8) % 2]
  }
  return interleave(data, version)
}

function interleave(data: Uint8Array, version: number): Uint8Array {
  const numBlocks = NUM_BLOCKS[version]
  const eccLen = ECC_PER_BLOCK[version]
  const shortLen = Math.floor(data.length / numBlocks)
  const numLong = data.length % numBlocks
  const blocks: Uint8Array[] = []
  const eccBlocks: Uint8Array[] = []
  let offset = 0
  for (let b = 0; b < numBlocks; b++) {
    const len = shortLen + (b >= numBlocks - numLong ? 1 : 0)
    const block = data.slice(offset, offset + len)
    offset += len
    blocks.push(block)
    eccBlocks.push(rsEncode(block, eccLen))
  }
  const out = new Uint8Array(totalCodewords(version))
  let at = 0
  const maxLen = shortLen + (numLong > 0 ? 1 : 0)
  for (let i = 0; i < maxLen; i++) {
    for (const block of blocks) {
      if (i < block.length) {
        out[at++] = block[i]
      }
    }
  }
  for (let i = 0; i < eccLen; i++) {
    for (const ecc of eccBlocks) {
      out[at++] = ecc[i]
    }
  }
  return out
}

// ---------------------------------------------------------------------------
// matrix construction

export interface QrMatrix {
  version: number
  size: number
  modules: boolean[][]
}

function chooseVersion(payloadLength: number): number {
  for (let version = 1; version <= MAX_VERSION; version++) {
    if (payloadLength <= byteCapacity(version)) {
      return version
    }
  }
  throw new QrCapacityError(
    `payload of ${payloadLength} bytes exceeds version ${MAX_VERSION} capacity ` +
      `(${byteCapacity(MAX_VERSION)} bytes)`,
  )
}

// format info for level L (indicator 01) with mask 0: BCH(15,5) + fixed mask
export function formatBits(): number {
  const data = (0b01 << 3) | 0
  let rem = data
  for (let i = 0; i < 10; i++) {
    rem = (rem << 1) ^ ((rem >> 9) * 0x537)
  }
  return ((data << 10) | rem) ^ 0x5412
}

// version info for v >= 7: BCH(18,6)
export function versionBits(version: number): number {
  let rem = version
  for (let i = 0; i < 12; i++) {
    rem = (rem << 1) ^ ((rem >> 11) * 0x1f25)
  }
  return (version << 12) | rem
}

export function encodeQr(text: string): QrMatrix {
  const payload = new TextEncoder().encode(text)
  const version = chooseVersion(payload.length)
  const size = 17 + 4 * version
  const codewords = buildCodewords(payload, version)

  const modules: boolean[][] = Array.from({ length: size }, () =>
    new Array<boolean>(size).fill(false),
  )
  const isFunction: boolean[][] = Array.from({ length: size }, () =>
    new Array<boolean>(size).fill(false),
  )
  const set = (row: number, col: number, dark: boolean) => {
    modules[row][col] = dark
    isFunction[row][col] = true
  }

  // finder patterns with separators
  const finder = (top: number, left: number) => {
    for (let r = -1; r <= 7; r++) {
      for (let c = -1; c <= 7; c++) {
        const row = top + r
        const col = left + c
        if (row < 0 || row >= size || col < 0 || col >= size) {
          continue
        }
        const inRing =
          r >= 0 && r <= 6 && c >= 0 && c <= 6 &&
          (r === 0 || r === 6 || c === 0 || c === 6 ||
            (r >= 2 && r <= 4 && c >= 2 && c <= 4))
        set(row, col, inRing)
      }
    }
  }
  finder(0, 0)
  finder(0, size - 7)
  finder(size - 7, 0)

  // timing patterns
  for (let i = 8; i < size - 8; i++) {
    if (!isFunction[6][i]) {
      set(6, i, i % 2 === 0)
    }
    if (!isFunction[i][6]) {
      set(i, 6, i % 2 === 0)
    }
  }

  // alignment patterns: all center pairs except the three finder corners
  const centers = ALIGNMENT_CENTERS[version] ?? []
  const last = size - 7
  for (const cr of centers) {
    for (const cc of centers) {
      if ((cr === 6 && cc === 6) || (cr === 6 && cc === last) || (cr === last && cc === 6)) {
        continue
      }
      for (let r = -2; r <= 2; r++) {
        for (let c = -2; c <= 2; c++) {
          set(cr + r, cc + c, Math.max(Math.abs(r), Math.abs(c)) !== 1)
        }
      }
    }
  }

  // dark module plus reserved format areas
  set(4 * version + 9, 8, true)
  for (let i = 0; i <= 8; i++) {
    if (i !== 6) {
      if (!isFunction[8][i]) set(8, i, false)
      if (!isFunction[i][8]) set(i, 8, false)
    }
  }
  for (let i = 0; i < 8; i++) {
    if (!isFunction[size - 1 - i][8]) set(size - 1 - i, 8, false)
    if (!isFunction[8][size - 1 - i]) set(8, size - 1 - i, false)
  }

  // version information blocks for v >= 7
  if (version >= 7) {
    const vbits = versionBits(version)
    for (let i = 0; i < 18; i++) {
      const bit = ((vbits >> i) & 1) === 1
      const a = size - 11 + (i % 3)
      const b = Math.floor(i / 3)
      set(a, b, bit)
      set(b, a, bit)
    }
  }

  // zig-zag data placement, skipping the vertical timing column
  const totalBits = codewords.length * 8
  let bitIndex = 0
  for (let right = size - 1; right >= 1; right -= 2) {
    if (right === 6) {
      right = 5
    }
    for (let vert = 0; vert < size; vert++) {
      for (let j = 0; j < 2; j++) {
        const col = right - j
        const upward = ((right + 1) & 2) === 0
        const row = upward ? size - 1 - vert : vert
        if (!isFunction[row][col] && bitIndex < totalBits) {
          const bit = (codewords[bitIndex >> 3] >> (7 - (bitIndex & 7))) & 1
          modules[row][col] = bit === 1
          bitIndex++
        }
      }
    }
  }

  // mask 0: flip data modules where (row + col) is even
  for (let row = 0; row < size; row++) {
    for (let col = 0; col < size; col++) {
      if (!isFunction[row][col] && (row + col) % 2 === 0) {
        modules[row][col] = !modules[row][col]
      }
    }
  }

  // format information, two copies
  const format = formatBits()
  const bit = (i: number) => ((format >> i) & 1) === 1
  for (let i = 0; i <= 5; i++) {
    set(8, i, bit(i))
  }
  set(8, 7, bit(6))
  set(8, 8, bit(7))
  set(7, 8, bit(8))
  for (let i = 9; i <= 14; i++) {
    set(14 - i, 8, bit(i))
  }
  for (let i = 0; i <= 7; i++) {
    set(size - 1 - i, 8, bit(i))
  }
  for (let i = 8; i <= 14; i++) {
    set(8, size - 15 + i, bit(i))
  }

  return { version, size, modules }
}

export function matrixToSvg(matrix: QrMatrix, scale = 6, margin = 4): string {
  const dimension = (matrix.size + 2 * margin) * scale
  const cells: string[] = []
  for (let row = 0; row < matrix.size; row++) {
    for (let col = 0; col < matrix.size; col++) {
      if (matrix.modules[row][col]) {
        const x = (col + margin) * scale
        const y = (row + margin) * scale
        cells.push(`M${x} ${y}h${scale}v${scale}h-${scale}z`)
      }
    }
  }
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${dimension} ${dimension}"` +
    ` width="${dimension}" height="${dimension}" role="img" aria-label="login payload">` +
    `<rect width="100%" height="100%" fill="#ffffff"/>` +
    `<path d="${cells.join("")}" fill="#000000"/></svg>`
  )
}
