# Models/Schemas Package 