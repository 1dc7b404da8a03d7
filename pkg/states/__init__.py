from .base import StateBuilder, displaced
from .vacuum import Vacuum, vacuum
from .cat_breeding import (BredGkp, BreedingParams, SqueezedCat, bred_gkp, breeding_betas,
                           lattice_matched_amplitude, sensor_offset, squeezed_cat)
from .grn_sensor import GrnParams, GrnSensor, grn_sensor

BUILDERS = {
    Vacuum.name: Vacuum,
    BredGkp.name: BredGkp,
    SqueezedCat.name: SqueezedCat,
    GrnSensor.name: GrnSensor,
}
